//! Ingestion of real-world temporal edge lists (KONECT-style `out.*` files).
//!
//! Records are whitespace-separated `src dst weight timestamp` lines;
//! `%` and `#` start comments. Directed records are folded onto canonical
//! undirected edges, positive weights become insertions and negative ones
//! deletions. Records that violate the current state — duplicate inserts,
//! deletes of absent edges, self-loops — are dropped and counted rather than
//! rejected, since the raw datasets contain all three. Vertex ids are
//! compacted to `[0, n)` in order of first appearance in a kept record.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use crate::graph::{EdgeKey, FormatError, UpdateOp, UpdateSequence, VertexId};

use super::GenError;

/// Result of replay-filtering a temporal file.
#[derive(Debug)]
pub struct TemporalIngest {
    pub sequence: UpdateSequence,
    pub dropped_duplicate_inserts: u64,
    pub dropped_missing_deletes: u64,
    pub dropped_self_loops: u64,
}

pub fn parse_temporal_file(reader: impl BufRead) -> Result<TemporalIngest, GenError> {
    let mut present: HashSet<(u64, u64)> = HashSet::new();
    let mut ids: HashMap<u64, u32> = HashMap::new();
    let mut ops_raw: Vec<(bool, u64, u64)> = Vec::new();
    let mut dropped_duplicate_inserts = 0;
    let mut dropped_missing_deletes = 0;
    let mut dropped_self_loops = 0;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(FormatError::from)?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(FormatError::at(
                lineno,
                format!("expected `src dst weight timestamp`, got {} fields", fields.len()),
            )
            .into());
        }
        let src: u64 = fields[0]
            .parse()
            .map_err(|e| FormatError::at(lineno, format!("bad src: {e}")))?;
        let dst: u64 = fields[1]
            .parse()
            .map_err(|e| FormatError::at(lineno, format!("bad dst: {e}")))?;
        let weight: f64 = fields[2]
            .parse()
            .map_err(|e| FormatError::at(lineno, format!("bad weight: {e}")))?;
        if weight == 0.0 {
            return Err(FormatError::at(lineno, "zero weight is neither insert nor delete").into());
        }
        if src == dst {
            dropped_self_loops += 1;
            continue;
        }
        let key = (src.min(dst), src.max(dst));
        if weight > 0.0 {
            if !present.insert(key) {
                dropped_duplicate_inserts += 1;
                continue;
            }
            ops_raw.push((true, src, dst));
        } else {
            if !present.remove(&key) {
                dropped_missing_deletes += 1;
                continue;
            }
            ops_raw.push((false, src, dst));
        }
    }

    // Compact ids in order of first appearance among the kept records.
    let mut ops = Vec::with_capacity(ops_raw.len());
    for (is_insert, src, dst) in ops_raw {
        let next = ids.len() as u32;
        let ua = *ids.entry(src).or_insert(next);
        let next = ids.len() as u32;
        let ub = *ids.entry(dst).or_insert(next);
        let e = EdgeKey::new(VertexId(ua), VertexId(ub)).expect("self-loops were filtered");
        ops.push(if is_insert {
            UpdateOp::insert(e)
        } else {
            UpdateOp::delete(e)
        });
    }
    let n = ids.len();
    let sequence = UpdateSequence::from_ops(n, ops)?;
    Ok(TemporalIngest {
        sequence,
        dropped_duplicate_inserts,
        dropped_missing_deletes,
        dropped_self_loops,
    })
}
