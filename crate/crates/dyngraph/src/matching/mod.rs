//! Fully dynamic maximal matching.
//!
//! Five algorithms share the [`DynamicMatching`] interface:
//!
//! * [`TrivialMatch`] — greedy baseline over swap-delete neighbor arrays.
//! * [`Hier1Match`] — two-level hierarchy with random stealing.
//! * [`Hier2Match`] — log₂(n)-level hierarchy with lazily maintained levels.
//! * [`RandR1Match`] — random edge ranks with per-vertex search trees keyed
//!   by eliminator rank; maintains the lexicographically first maximal
//!   matching.
//! * [`RandR2Match`] — random edge ranks over lazy rank-sorted neighbor
//!   arrays; maintains the same matching with a repair queue.
//!
//! The two rank-based algorithms agree edge-for-edge with the greedy oracle
//! in [`crate::oracle`] after every update; the other three only promise
//! maximality.

use crate::graph::{EdgeKey, Rank, UpdateOp, VertexId};
use crate::UpdateError;

mod hier1;
mod hier2;
mod randr1;
mod randr2;
mod trivial;

pub use hier1::Hier1Match;
pub use hier2::Hier2Match;
pub use randr1::RandR1Match;
pub use randr2::RandR2Match;
pub use trivial::TrivialMatch;

pub(crate) const NO_PARTNER: u32 = u32::MAX;

/// Uniform interface over the five matching algorithms.
pub trait DynamicMatching {
    /// Applies one edge update. The update must be valid against the current
    /// graph (the sequence validator runs upstream, not here).
    fn apply(&mut self, op: UpdateOp) -> Result<(), UpdateError>;

    fn partner_of(&self, v: VertexId) -> Option<VertexId>;

    /// The current matching as a sorted edge list, for oracle checkpoints.
    fn matching(&self) -> Vec<EdgeKey>;

    /// Number of matched vertex pairs.
    fn matching_size(&self) -> usize;

    /// Per-algorithm event counters for the harness. Deterministic under a
    /// fixed seed and update sequence.
    fn counters(&self) -> Vec<(&'static str, u64)>;
}

/// Extra surface of the two rank-based algorithms, used by the LFMM oracle
/// checks: the live edge ranks, and rank-forcing insertion for replaying
/// hand-constructed traces.
pub trait RankedMatching: DynamicMatching {
    /// Current `(edge, π(edge))` pairs, sorted by edge.
    fn edge_ranks(&self) -> Vec<(EdgeKey, Rank)>;

    /// Inserts `e` with a caller-chosen rank instead of a drawn one. The
    /// rank must be unused; replaying mixed drawn/forced ranks is allowed.
    fn insert_ranked(&mut self, e: EdgeKey, rank: Rank);
}

/// Sorted matching edge list from a partner table.
pub(crate) fn collect_matching(partner: &[u32]) -> Vec<EdgeKey> {
    let mut edges = Vec::new();
    for (v, &p) in partner.iter().enumerate() {
        if p != NO_PARTNER && (v as u32) < p {
            edges.push(
                EdgeKey::new(VertexId(v as u32), VertexId(p)).expect("partner self-loop"),
            );
        }
    }
    edges
}

pub(crate) fn matched_pairs(partner: &[u32]) -> usize {
    partner.iter().filter(|&&p| p != NO_PARTNER).count() / 2
}
