//! Brute-force ground truth used to machine-check every dynamic algorithm:
//! greedy construction of the lexicographically first maximal matching,
//! proper-coloring and maximality checks, and the cover-condition
//! characterization of the LFMM.
//!
//! Everything here is a pure function over an immutable [`Snapshot`] (or over
//! borrowed slices, for callers that keep their own live state). The oracle
//! deliberately shares no code with the dynamic algorithms it validates.

use std::collections::{HashMap, HashSet};
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::coloring::Color;
use crate::graph::{parse_edge_fields, EdgeKey, FormatError, Rank, VertexId};

/// A static picture of a graph, with optional per-edge ranks, a coloring,
/// and a matching, for oracle validation.
#[derive(Clone, Debug, Default)]
pub struct Snapshot {
    pub n: usize,
    pub edges: Vec<EdgeKey>,
    pub ranks: Option<HashMap<EdgeKey, Rank>>,
    pub colors: Option<Vec<Color>>,
    pub matching: Option<Vec<EdgeKey>>,
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("edge {0:?} appears with a duplicate rank")]
    DuplicateRank(EdgeKey),
    #[error("edge {0:?} has no rank")]
    MissingRank(EdgeKey),
    #[error("vertex {0} has color {1}, outside the palette [0, {2}]")]
    ColorOutOfRange(VertexId, Color, Color),
    #[error("matching edge {0:?} is not an edge of the graph")]
    MatchingEdgeAbsent(EdgeKey),
    #[error("vertex {0} is covered by two matching edges")]
    NotAMatching(VertexId),
}

/// Greedy construction of `LFMM(G, π)`: visit edges in ascending rank order
/// and take every edge whose endpoints are both still free. The result is
/// the unique maximal matching in which every non-matching edge is covered by
/// an incident matching edge of smaller rank.
pub fn greedy_lfmm(
    n: usize,
    ranked_edges: &[(EdgeKey, Rank)],
) -> Result<Vec<EdgeKey>, OracleError> {
    let mut order: Vec<(Rank, EdgeKey)> = ranked_edges.iter().map(|&(e, r)| (r, e)).collect();
    order.sort_unstable();
    for pair in order.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(OracleError::DuplicateRank(pair[1].1));
        }
    }
    let mut matched = vec![false; n];
    let mut matching = Vec::new();
    for (_, e) in order {
        if !matched[e.u().index()] && !matched[e.v().index()] {
            matched[e.u().index()] = true;
            matched[e.v().index()] = true;
            matching.push(e);
        }
    }
    matching.sort_unstable();
    Ok(matching)
}

/// True iff every edge is bichromatic. Colors must lie in `[0, max_color]`.
pub fn is_proper_coloring(
    edges: &[EdgeKey],
    colors: &[Color],
    max_color: Color,
) -> Result<bool, OracleError> {
    for (v, &c) in colors.iter().enumerate() {
        if c > max_color {
            return Err(OracleError::ColorOutOfRange(
                VertexId(v as u32),
                c,
                max_color,
            ));
        }
    }
    Ok(edges
        .iter()
        .all(|e| colors[e.u().index()] != colors[e.v().index()]))
}

/// True iff `matching` is maximal in the graph: every edge has at least one
/// matched endpoint. Errors if `matching` is not a matching contained in the
/// edge set.
pub fn is_maximal_matching(
    n: usize,
    edges: &[EdgeKey],
    matching: &[EdgeKey],
) -> Result<bool, OracleError> {
    let edge_set: HashSet<EdgeKey> = edges.iter().copied().collect();
    let mut matched = vec![false; n];
    for &e in matching {
        if !edge_set.contains(&e) {
            return Err(OracleError::MatchingEdgeAbsent(e));
        }
        for x in [e.u(), e.v()] {
            if matched[x.index()] {
                return Err(OracleError::NotAMatching(x));
            }
            matched[x.index()] = true;
        }
    }
    Ok(edges
        .iter()
        .all(|e| matched[e.u().index()] || matched[e.v().index()]))
}

/// Cover-condition check: `matching` equals `LFMM(G, π)` iff every
/// non-matching edge has an incident matching edge of strictly smaller rank.
/// This is the direct characterization; tests cross-validate it against
/// set equality with [`greedy_lfmm`].
pub fn is_lfmm(
    n: usize,
    ranked_edges: &[(EdgeKey, Rank)],
    matching: &[EdgeKey],
) -> Result<bool, OracleError> {
    let mut seen: HashSet<u64> = HashSet::new();
    for &(e, r) in ranked_edges {
        if !seen.insert(r.key()) {
            return Err(OracleError::DuplicateRank(e));
        }
    }
    let rank_of: HashMap<EdgeKey, Rank> = ranked_edges.iter().copied().collect();
    let match_set: HashSet<EdgeKey> = matching.iter().copied().collect();
    // k(v): rank of the matching edge at v, if any.
    let mut vertex_rank = vec![Rank::INFINITY; n];
    let mut matched = vec![false; n];
    for &e in matching {
        let r = *rank_of
            .get(&e)
            .ok_or(OracleError::MatchingEdgeAbsent(e))?;
        for x in [e.u(), e.v()] {
            if matched[x.index()] {
                return Err(OracleError::NotAMatching(x));
            }
            matched[x.index()] = true;
            vertex_rank[x.index()] = r;
        }
    }
    for &(e, r) in ranked_edges {
        if match_set.contains(&e) {
            continue;
        }
        let covered =
            vertex_rank[e.u().index()] < r || vertex_rank[e.v().index()] < r;
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

impl Snapshot {
    pub fn new(n: usize) -> Snapshot {
        Snapshot {
            n,
            ..Snapshot::default()
        }
    }

    fn ranked_edges(&self) -> Result<Vec<(EdgeKey, Rank)>, OracleError> {
        let ranks = self.ranks.as_ref().expect("snapshot has no ranks");
        self.edges
            .iter()
            .map(|&e| ranks.get(&e).map(|&r| (e, r)).ok_or(OracleError::MissingRank(e)))
            .collect()
    }

    pub fn greedy_lfmm(&self) -> Result<Vec<EdgeKey>, OracleError> {
        greedy_lfmm(self.n, &self.ranked_edges()?)
    }

    pub fn is_proper_coloring(&self, max_color: Color) -> Result<bool, OracleError> {
        let colors = self.colors.as_ref().expect("snapshot has no colors");
        is_proper_coloring(&self.edges, colors, max_color)
    }

    pub fn is_maximal_matching(&self) -> Result<bool, OracleError> {
        let matching = self.matching.as_ref().expect("snapshot has no matching");
        is_maximal_matching(self.n, &self.edges, matching)
    }

    pub fn is_lfmm(&self) -> Result<bool, OracleError> {
        let matching = self.matching.as_ref().expect("snapshot has no matching");
        is_lfmm(self.n, &self.ranked_edges()?, matching)
    }

    /// Reads the snapshot text format: the update-sequence header and edge
    /// records (`i` lines only), extended with optional `r <u> <v> <rank>`,
    /// `m <u> <v>` and `c <v> <color>` lines.
    pub fn read_from(reader: impl BufRead) -> Result<Snapshot, FormatError> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        let mut ranks: HashMap<EdgeKey, Rank> = HashMap::new();
        let mut colors: Vec<(VertexId, Color)> = Vec::new();
        let mut matching = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut fields = trimmed.split_whitespace();
            match fields.next().unwrap() {
                "n" => {
                    let count = fields
                        .next()
                        .ok_or_else(|| FormatError::at(lineno, "missing vertex count"))?
                        .parse::<usize>()
                        .map_err(|e| FormatError::at(lineno, format!("bad vertex count: {e}")))?;
                    n = Some(count);
                }
                "i" => edges.push(parse_edge_fields(&mut fields, lineno)?),
                "m" => matching.push(parse_edge_fields(&mut fields, lineno)?),
                "r" => {
                    let e = parse_edge_fields(&mut fields, lineno)?;
                    let raw = fields
                        .next()
                        .ok_or_else(|| FormatError::at(lineno, "missing rank"))?
                        .parse::<f64>()
                        .map_err(|err| FormatError::at(lineno, format!("bad rank: {err}")))?;
                    let rank = Rank::new(raw)
                        .map_err(|err| FormatError::at(lineno, err.to_string()))?;
                    ranks.insert(e, rank);
                }
                "c" => {
                    let v = fields
                        .next()
                        .ok_or_else(|| FormatError::at(lineno, "missing vertex"))?
                        .parse::<u32>()
                        .map_err(|e| FormatError::at(lineno, format!("bad vertex: {e}")))?;
                    let c = fields
                        .next()
                        .ok_or_else(|| FormatError::at(lineno, "missing color"))?
                        .parse::<Color>()
                        .map_err(|e| FormatError::at(lineno, format!("bad color: {e}")))?;
                    colors.push((VertexId(v), c));
                }
                other => {
                    return Err(FormatError::at(lineno, format!("unknown record tag {other:?}")));
                }
            }
            if fields.next().is_some() {
                return Err(FormatError::at(lineno, "trailing fields"));
            }
        }
        let n = n.ok_or_else(|| FormatError::at(0, "missing n header"))?;
        let mut snapshot = Snapshot::new(n);
        snapshot.edges = edges;
        if !ranks.is_empty() {
            snapshot.ranks = Some(ranks);
        }
        if !matching.is_empty() {
            snapshot.matching = Some(matching);
        }
        if !colors.is_empty() {
            let mut xi = vec![0; n];
            for (v, c) in colors {
                xi[v.index()] = c;
            }
            snapshot.colors = Some(xi);
        }
        Ok(snapshot)
    }

    pub fn write_to(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "n {}", self.n)?;
        for e in &self.edges {
            writeln!(w, "i {} {}", e.u(), e.v())?;
        }
        if let Some(ranks) = &self.ranks {
            let mut lines: Vec<_> = ranks.iter().collect();
            lines.sort_by_key(|(e, _)| **e);
            for (e, r) in lines {
                writeln!(w, "r {} {} {}", e.u(), e.v(), r.value())?;
            }
        }
        if let Some(colors) = &self.colors {
            for (v, c) in colors.iter().enumerate() {
                writeln!(w, "c {v} {c}")?;
            }
        }
        if let Some(matching) = &self.matching {
            for e in matching {
                writeln!(w, "m {} {}", e.u(), e.v())?;
            }
        }
        Ok(())
    }
}
