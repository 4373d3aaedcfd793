//! Core dynamic-graph model: a fixed vertex set `[0, n)`, an edge set that
//! evolves through single-edge insertions and deletions, and the three
//! adjacency flavors the dynamic algorithms are built on.
//!
//! All graphs are undirected and unweighted. Edges are canonical unordered
//! pairs ([`EdgeKey`]), self-loops are rejected at construction, and an
//! [`UpdateSequence`] carries a degree bound `Δ` that holds over the whole
//! replay. Sequences are validated at generation and ingestion time; the
//! algorithms themselves assume well-formed updates.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::hash::{BuildHasherDefault, Hash, Hasher};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use indexmap::IndexSet;
use rand::Rng;
use thiserror::Error;

/// Multiply-rotate hasher for the small integer keys (vertex ids, edge
/// keys, rank bits) that dominate the hot paths. Fixed-keyed, so map and
/// set behavior is reproducible across runs.
#[derive(Default)]
pub struct FastHasher(u64);

impl Hasher for FastHasher {
    #[inline]
    fn finish(&self) -> u64 {
        self.0
    }

    #[inline]
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.add(b as u64);
        }
    }

    #[inline]
    fn write_u32(&mut self, v: u32) {
        self.add(v as u64);
    }

    #[inline]
    fn write_u64(&mut self, v: u64) {
        self.add(v);
    }

    #[inline]
    fn write_usize(&mut self, v: usize) {
        self.add(v as u64);
    }
}

impl FastHasher {
    #[inline]
    fn add(&mut self, v: u64) {
        self.0 = (self.0.rotate_left(5) ^ v).wrapping_mul(0x517c_c1b7_2722_0a95);
    }
}

pub type FastBuildHasher = BuildHasherDefault<FastHasher>;
pub type FastHashMap<K, V> = std::collections::HashMap<K, V, FastBuildHasher>;
pub type FastHashSet<T> = std::collections::HashSet<T, FastBuildHasher>;
pub type FastIndexSet<T> = IndexSet<T, FastBuildHasher>;

/// Vertex identifier, always in `[0, n)` for the owning structure.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Canonical undirected edge: endpoints are stored with `u < v`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    u: VertexId,
    v: VertexId,
}

impl EdgeKey {
    /// Normalizes an endpoint pair into a canonical edge. Self-loops are
    /// invalid input.
    pub fn new(a: VertexId, b: VertexId) -> Result<EdgeKey, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        Ok(if a < b {
            EdgeKey { u: a, v: b }
        } else {
            EdgeKey { u: b, v: a }
        })
    }

    #[inline]
    pub fn u(self) -> VertexId {
        self.u
    }

    #[inline]
    pub fn v(self) -> VertexId {
        self.v
    }

    /// The endpoint that is not `x`. Panics if `x` is not an endpoint.
    #[inline]
    pub fn other(self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            assert_eq!(x, self.v, "vertex {x} is not an endpoint of {self:?}");
            self.u
        }
    }
}

impl fmt::Debug for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// Convenience constructor used all over the tests.
pub fn edge(a: u32, b: u32) -> EdgeKey {
    EdgeKey::new(VertexId(a), VertexId(b)).expect("self-loop in edge()")
}

/// Random rank in the open interval `(0,1)`, plus the `∞` sentinel used for
/// unmatched vertices. Ordered totally via `f64::total_cmp`, which is safe
/// here because ranks are positive and finite (or `+∞`).
#[derive(Clone, Copy)]
pub struct Rank(f64);

impl Rank {
    pub const INFINITY: Rank = Rank(f64::INFINITY);

    /// Wraps a value in `(0,1)`. The endpoints are excluded so that finite
    /// ranks can never collide with the `∞` sentinel or degenerate to 0.
    pub fn new(x: f64) -> Result<Rank, GraphError> {
        if x > 0.0 && x < 1.0 {
            Ok(Rank(x))
        } else {
            Err(GraphError::RankOutOfRange(x))
        }
    }

    /// Draws a uniform rank in the open interval `(0,1)`.
    pub fn draw<R: Rng + ?Sized>(rng: &mut R) -> Rank {
        loop {
            let x: f64 = rng.random();
            if x > 0.0 && x < 1.0 {
                return Rank(x);
            }
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// Bit pattern, monotone in the rank value for our domain.
    #[inline]
    pub fn key(self) -> u64 {
        self.0.to_bits()
    }
}

impl PartialEq for Rank {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}

impl Eq for Rank {}

impl PartialOrd for Rank {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rank {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Hash for Rank {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl fmt::Debug for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Errors raised by the basic graph types.
#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("self-loop at vertex {0} is not a valid edge")]
    SelfLoop(VertexId),
    #[error("vertex {0} out of range for n={1}")]
    VertexOutOfRange(VertexId, usize),
    #[error("edge {0:?} not present")]
    MissingEdge(EdgeKey),
    #[error("rank {0} outside the open interval (0,1)")]
    RankOutOfRange(f64),
}

/// Errors raised while validating an update sequence.
#[derive(Debug, Error, PartialEq)]
pub enum SequenceError {
    #[error("op {index}: vertex {vertex} out of range for n={n}")]
    VertexOutOfRange {
        index: usize,
        vertex: VertexId,
        n: usize,
    },
    #[error("op {index}: insert of already-present edge {edge:?}")]
    DuplicateInsert { index: usize, edge: EdgeKey },
    #[error("op {index}: delete of absent edge {edge:?}")]
    DeleteMissing { index: usize, edge: EdgeKey },
    #[error("op {index}: degree of vertex {vertex} exceeds bound {bound}")]
    DegreeBound {
        index: usize,
        vertex: VertexId,
        bound: usize,
    },
}

/// Errors raised while reading the text form of a sequence or snapshot.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("invalid sequence: {0}")]
    Sequence(#[from] SequenceError),
    #[error("invalid edge: {0}")]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl FormatError {
    pub(crate) fn at(line: usize, msg: impl Into<String>) -> FormatError {
        FormatError::Malformed {
            line,
            msg: msg.into(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UpdateKind {
    Insert,
    Delete,
}

/// A single edge update.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct UpdateOp {
    pub kind: UpdateKind,
    pub edge: EdgeKey,
}

impl UpdateOp {
    pub fn insert(edge: EdgeKey) -> UpdateOp {
        UpdateOp {
            kind: UpdateKind::Insert,
            edge,
        }
    }

    pub fn delete(edge: EdgeKey) -> UpdateOp {
        UpdateOp {
            kind: UpdateKind::Delete,
            edge,
        }
    }
}

/// An ordered list of edge updates over a fixed vertex set, together with a
/// degree bound `Δ` that holds after every prefix of the replay.
///
/// Construction always validates: inserts must target absent edges, deletes
/// present ones, and no vertex may ever exceed `Δ` neighbors.
#[derive(Clone, Debug, PartialEq)]
pub struct UpdateSequence {
    n: usize,
    delta_bound: usize,
    ops: Vec<UpdateOp>,
}

impl UpdateSequence {
    /// Builds a sequence and sets `Δ` to the maximum degree observed during
    /// the replay.
    pub fn from_ops(n: usize, ops: Vec<UpdateOp>) -> Result<UpdateSequence, SequenceError> {
        let observed = validate_ops(n, &ops, usize::MAX)?;
        Ok(UpdateSequence {
            n,
            delta_bound: observed,
            ops,
        })
    }

    /// Builds a sequence with an explicit degree bound, e.g. the `Δ` a
    /// generator was configured with (the observed maximum may be smaller).
    pub fn with_delta_bound(
        n: usize,
        delta_bound: usize,
        ops: Vec<UpdateOp>,
    ) -> Result<UpdateSequence, SequenceError> {
        validate_ops(n, &ops, delta_bound)?;
        Ok(UpdateSequence {
            n,
            delta_bound,
            ops,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta_bound(&self) -> usize {
        self.delta_bound
    }

    pub fn ops(&self) -> &[UpdateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Replaces the degree bound, re-validating against it.
    pub fn set_delta_bound(&mut self, delta_bound: usize) -> Result<(), SequenceError> {
        validate_ops(self.n, &self.ops, delta_bound)?;
        self.delta_bound = delta_bound;
        Ok(())
    }

    /// Reads the text format: a `n <vertex_count>` header, then one record
    /// `i <u> <v>` or `d <u> <v>` per line. Lines starting with `#` are
    /// comments; a `# delta <d>` comment written by our own tools is honored
    /// as the degree bound.
    pub fn read_from(reader: impl BufRead) -> Result<UpdateSequence, FormatError> {
        let mut n: Option<usize> = None;
        let mut delta_hint: Option<usize> = None;
        let mut ops = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                let mut it = comment.split_whitespace();
                if it.next() == Some("delta") {
                    if let Some(Ok(d)) = it.next().map(str::parse) {
                        delta_hint = Some(d);
                    }
                }
                continue;
            }
            let mut fields = trimmed.split_whitespace();
            let tag = fields.next().unwrap();
            match tag {
                "n" => {
                    if n.is_some() {
                        return Err(FormatError::at(lineno, "duplicate n header"));
                    }
                    let count = fields
                        .next()
                        .ok_or_else(|| FormatError::at(lineno, "missing vertex count"))?
                        .parse::<usize>()
                        .map_err(|e| FormatError::at(lineno, format!("bad vertex count: {e}")))?;
                    n = Some(count);
                }
                "i" | "d" => {
                    if n.is_none() {
                        return Err(FormatError::at(lineno, "update before n header"));
                    }
                    let e = parse_edge_fields(&mut fields, lineno)?;
                    ops.push(match tag {
                        "i" => UpdateOp::insert(e),
                        _ => UpdateOp::delete(e),
                    });
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
        let seq = match delta_hint {
            Some(d) => UpdateSequence::with_delta_bound(n, d, ops)?,
            None => UpdateSequence::from_ops(n, ops)?,
        };
        Ok(seq)
    }

    /// Writes the text format, including the `# delta` hint comment.
    pub fn write_to(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "# delta {}", self.delta_bound)?;
        writeln!(w, "n {}", self.n)?;
        for op in &self.ops {
            let tag = match op.kind {
                UpdateKind::Insert => 'i',
                UpdateKind::Delete => 'd',
            };
            writeln!(w, "{} {} {}", tag, op.edge.u(), op.edge.v())?;
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<UpdateSequence, FormatError> {
        let file = File::open(path)?;
        UpdateSequence::read_from(BufReader::new(file))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> io::Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()
    }
}

pub(crate) fn parse_edge_fields<'a>(
    fields: &mut impl Iterator<Item = &'a str>,
    lineno: usize,
) -> Result<EdgeKey, FormatError> {
    let mut endpoint = |name| {
        fields
            .next()
            .ok_or_else(|| FormatError::at(lineno, format!("missing {name}")))?
            .parse::<u32>()
            .map_err(|e| FormatError::at(lineno, format!("bad {name}: {e}")))
    };
    let u = endpoint("u")?;
    let v = endpoint("v")?;
    Ok(EdgeKey::new(VertexId(u), VertexId(v))?)
}

/// Replays `ops`, checking well-formedness and the degree bound. Returns the
/// maximum degree seen at any point.
fn validate_ops(n: usize, ops: &[UpdateOp], bound: usize) -> Result<usize, SequenceError> {
    let mut present: HashSet<EdgeKey> = HashSet::new();
    let mut degree = vec![0usize; n];
    let mut max_seen = 0usize;
    for (index, op) in ops.iter().enumerate() {
        let e = op.edge;
        for x in [e.u(), e.v()] {
            if x.index() >= n {
                return Err(SequenceError::VertexOutOfRange {
                    index,
                    vertex: x,
                    n,
                });
            }
        }
        match op.kind {
            UpdateKind::Insert => {
                if !present.insert(e) {
                    return Err(SequenceError::DuplicateInsert { index, edge: e });
                }
                for x in [e.u(), e.v()] {
                    degree[x.index()] += 1;
                    if degree[x.index()] > bound {
                        return Err(SequenceError::DegreeBound {
                            index,
                            vertex: x,
                            bound,
                        });
                    }
                    max_seen = max_seen.max(degree[x.index()]);
                }
            }
            UpdateKind::Delete => {
                if !present.remove(&e) {
                    return Err(SequenceError::DeleteMissing { index, edge: e });
                }
                degree[e.u().index()] -= 1;
                degree[e.v().index()] -= 1;
            }
        }
    }
    Ok(max_seen)
}

/// Per-vertex dynamic arrays of neighbors; removal swaps the victim with the
/// last array element and pops. The workhorse of the trivial algorithms.
#[derive(Clone, Debug)]
pub struct SwapDeleteAdjacency {
    lists: Vec<Vec<VertexId>>,
}

impl SwapDeleteAdjacency {
    pub fn new(n: usize) -> SwapDeleteAdjacency {
        SwapDeleteAdjacency {
            lists: vec![Vec::new(); n],
        }
    }

    #[inline]
    pub fn insert(&mut self, e: EdgeKey) {
        self.lists[e.u().index()].push(e.v());
        self.lists[e.v().index()].push(e.u());
    }

    pub fn remove(&mut self, e: EdgeKey) -> Result<(), GraphError> {
        self.remove_arc(e.u(), e.v())?;
        self.remove_arc(e.v(), e.u())
    }

    fn remove_arc(&mut self, v: VertexId, w: VertexId) -> Result<(), GraphError> {
        let list = &mut self.lists[v.index()];
        match list.iter().position(|&x| x == w) {
            Some(pos) => {
                list.swap_remove(pos);
                Ok(())
            }
            None => Err(GraphError::MissingEdge(EdgeKey::new(v, w)?)),
        }
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.lists[v.index()]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.lists[v.index()].len()
    }
}

/// Per-vertex hash sets of neighbors, for expected-constant membership
/// queries. Backed by `IndexSet` so iteration order and random sampling are
/// reproducible under a fixed seed.
#[derive(Clone, Debug, Default)]
pub struct HashedAdjacency {
    sets: Vec<FastIndexSet<VertexId>>,
}

impl HashedAdjacency {
    pub fn new(n: usize) -> HashedAdjacency {
        HashedAdjacency {
            sets: vec![FastIndexSet::default(); n],
        }
    }

    pub fn insert(&mut self, e: EdgeKey) {
        self.sets[e.u().index()].insert(e.v());
        self.sets[e.v().index()].insert(e.u());
    }

    pub fn remove(&mut self, e: EdgeKey) -> Result<(), GraphError> {
        let a = self.sets[e.u().index()].swap_remove(&e.v());
        let b = self.sets[e.v().index()].swap_remove(&e.u());
        if a && b {
            Ok(())
        } else {
            Err(GraphError::MissingEdge(e))
        }
    }

    pub fn contains(&self, e: EdgeKey) -> bool {
        self.sets[e.u().index()].contains(&e.v())
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.sets[v.index()].iter().copied()
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.sets[v.index()].len()
    }
}

/// Per-vertex neighbor arrays keyed by edge rank, maintained lazily: inserts
/// append to a live array, deletes append to a tombstone array, and an access
/// compacts the vertex by sorting both arrays and striking out the deleted
/// entries.
///
/// Ranks must be unique across the lifetime of the structure (never reused
/// after a deletion), which makes the multiset subtraction in
/// [`compact`](Self::compact) exact.
#[derive(Clone, Debug)]
pub struct LazyRankedAdjacency {
    live: Vec<Vec<(Rank, VertexId)>>,
    dead: Vec<Vec<(Rank, VertexId)>>,
    sorted: Vec<bool>,
    degree: Vec<u32>,
}

impl LazyRankedAdjacency {
    pub fn new(n: usize) -> LazyRankedAdjacency {
        LazyRankedAdjacency {
            live: vec![Vec::new(); n],
            dead: vec![Vec::new(); n],
            sorted: vec![true; n],
            degree: vec![0; n],
        }
    }

    pub fn insert(&mut self, e: EdgeKey, rank: Rank) {
        self.insert_arc(e.u(), e.v(), rank);
        self.insert_arc(e.v(), e.u(), rank);
    }

    fn insert_arc(&mut self, v: VertexId, w: VertexId, rank: Rank) {
        let list = &mut self.live[v.index()];
        if let Some(&(last, _)) = list.last() {
            if last > rank {
                self.sorted[v.index()] = false;
            }
        }
        list.push((rank, w));
        self.degree[v.index()] += 1;
    }

    /// Marks the edge deleted. The live entries are only struck out at the
    /// next compaction of each endpoint.
    pub fn remove(&mut self, e: EdgeKey, rank: Rank) {
        self.dead[e.u().index()].push((rank, e.v()));
        self.dead[e.v().index()].push((rank, e.u()));
        self.degree[e.u().index()] -= 1;
        self.degree[e.v().index()] -= 1;
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v.index()] as usize
    }

    /// Compacts vertex `v` and returns its neighbors sorted by rank
    /// ascending. Idempotent until the next mutation of `v`. The stable
    /// sort is adaptive, and a compacted array mutates only by appends, so
    /// re-compaction costs roughly the length of the appended tail.
    pub fn compact(&mut self, v: VertexId) -> &[(Rank, VertexId)] {
        let i = v.index();
        if !self.dead[i].is_empty() || !self.sorted[i] {
            self.live[i].sort_by_key(|&(r, _)| r);
            if !self.dead[i].is_empty() {
                self.dead[i].sort_by_key(|&(r, _)| r);
                let live = &mut self.live[i];
                let dead = &self.dead[i];
                let mut keep = 0usize;
                let mut d = 0usize;
                for r in 0..live.len() {
                    if d < dead.len() && dead[d] == live[r] {
                        d += 1;
                    } else {
                        live[keep] = live[r];
                        keep += 1;
                    }
                }
                debug_assert_eq!(d, dead.len(), "tombstone without matching live entry");
                live.truncate(keep);
                self.dead[i].clear();
            }
            self.sorted[i] = true;
        }
        &self.live[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank(x: f64) -> Rank {
        Rank::new(x).unwrap()
    }

    #[test]
    fn edge_key_normalizes() {
        assert_eq!(edge(3, 1), edge(1, 3));
        assert_eq!(edge(3, 1).u(), VertexId(1));
        assert_eq!(edge(0, 7).u(), VertexId(0));
        assert_eq!(edge(0, 7).v(), VertexId(7));
        assert_eq!(
            EdgeKey::new(VertexId(5), VertexId(5)),
            Err(GraphError::SelfLoop(VertexId(5)))
        );
    }

    #[test]
    fn swap_delete_removal() {
        let mut adj = SwapDeleteAdjacency::new(10);
        for w in [2, 5, 9] {
            adj.insert(edge(0, w));
        }
        adj.remove(edge(0, 5)).unwrap();
        assert_eq!(adj.neighbors(VertexId(0)), &[VertexId(2), VertexId(9)]);

        let mut single = SwapDeleteAdjacency::new(3);
        single.insert(edge(1, 2));
        single.remove(edge(1, 2)).unwrap();
        assert!(single.neighbors(VertexId(1)).is_empty());

        let mut last = SwapDeleteAdjacency::new(10);
        for w in [2, 5, 9] {
            last.insert(edge(0, w));
        }
        last.remove(edge(0, 9)).unwrap();
        assert_eq!(last.neighbors(VertexId(0)), &[VertexId(2), VertexId(5)]);

        assert!(last.remove(edge(0, 9)).is_err());
    }

    #[test]
    fn lazy_ranked_compact_filters_and_sorts() {
        let mut adj = LazyRankedAdjacency::new(4);
        // v0 with neighbors a=1 (0.7), b=2 (0.2), c=3 (0.5); then c deleted.
        adj.insert(edge(0, 1), rank(0.7));
        adj.insert(edge(0, 2), rank(0.2));
        adj.insert(edge(0, 3), rank(0.5));
        adj.remove(edge(0, 3), rank(0.5));
        assert_eq!(
            adj.compact(VertexId(0)),
            &[(rank(0.2), VertexId(2)), (rank(0.7), VertexId(1))]
        );
        // Idempotent until the next mutation.
        assert_eq!(adj.compact(VertexId(0)).len(), 2);
        assert_eq!(adj.degree(VertexId(0)), 2);

        let mut empty = LazyRankedAdjacency::new(1);
        assert_eq!(empty.compact(VertexId(0)), &[]);

        let mut full = LazyRankedAdjacency::new(2);
        full.insert(edge(0, 1), rank(0.9));
        full.remove(edge(0, 1), rank(0.9));
        assert_eq!(full.compact(VertexId(0)), &[]);
        assert_eq!(full.compact(VertexId(1)), &[]);
    }

    #[test]
    fn lazy_ranked_reinsert_after_pending_tombstone() {
        // Delete and re-insert the same endpoint pair with a fresh rank while
        // the tombstone is still pending; compaction must strike out only the
        // old entry.
        let mut adj = LazyRankedAdjacency::new(2);
        adj.insert(edge(0, 1), rank(0.5));
        adj.remove(edge(0, 1), rank(0.5));
        adj.insert(edge(0, 1), rank(0.25));
        assert_eq!(adj.compact(VertexId(0)), &[(rank(0.25), VertexId(1))]);
        assert_eq!(adj.degree(VertexId(1)), 1);
    }

    #[test]
    fn sequence_validation() {
        let ops = vec![
            UpdateOp::insert(edge(0, 1)),
            UpdateOp::insert(edge(1, 2)),
            UpdateOp::delete(edge(0, 1)),
        ];
        let seq = UpdateSequence::from_ops(3, ops.clone()).unwrap();
        assert_eq!(seq.delta_bound(), 2);

        let dup = vec![UpdateOp::insert(edge(0, 1)), UpdateOp::insert(edge(1, 0))];
        assert!(matches!(
            UpdateSequence::from_ops(3, dup),
            Err(SequenceError::DuplicateInsert { index: 1, .. })
        ));

        let missing = vec![UpdateOp::delete(edge(0, 1))];
        assert!(matches!(
            UpdateSequence::from_ops(3, missing),
            Err(SequenceError::DeleteMissing { index: 0, .. })
        ));

        assert!(matches!(
            UpdateSequence::with_delta_bound(3, 1, ops),
            Err(SequenceError::DegreeBound { .. })
        ));

        let oob = vec![UpdateOp::insert(edge(0, 5))];
        assert!(matches!(
            UpdateSequence::from_ops(3, oob),
            Err(SequenceError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn text_format_round_trip() {
        let ops = vec![
            UpdateOp::insert(edge(0, 1)),
            UpdateOp::insert(edge(2, 1)),
            UpdateOp::delete(edge(0, 1)),
        ];
        let seq = UpdateSequence::with_delta_bound(4, 3, ops).unwrap();
        let mut buf = Vec::new();
        seq.write_to(&mut buf).unwrap();
        let back = UpdateSequence::read_from(&buf[..]).unwrap();
        assert_eq!(back, seq);
        assert_eq!(back.delta_bound(), 3);
    }

    #[test]
    fn text_format_rejects_garbage() {
        let no_header = "i 0 1\n";
        assert!(UpdateSequence::read_from(no_header.as_bytes()).is_err());
        let bad_tag = "n 4\nx 0 1\n";
        assert!(UpdateSequence::read_from(bad_tag.as_bytes()).is_err());
        let self_loop = "n 4\ni 2 2\n";
        assert!(UpdateSequence::read_from(self_loop.as_bytes()).is_err());
        let comments = "# a comment\nn 4\n# another\ni 0 1\n";
        assert_eq!(
            UpdateSequence::read_from(comments.as_bytes()).unwrap().len(),
            1
        );
    }

    #[test]
    fn rank_ordering_and_sentinel() {
        assert!(rank(0.2) < rank(0.7));
        assert!(rank(0.999) < Rank::INFINITY);
        assert!(Rank::new(0.0).is_err());
        assert!(Rank::new(1.0).is_err());
        assert!(Rank::INFINITY.is_infinite());
    }
}
