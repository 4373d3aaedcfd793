//! Fully dynamic (Δ+1)-vertex coloring.
//!
//! Four algorithms share the [`DynamicColoring`] interface:
//!
//! * [`RecurseCol`] — recolor-and-cascade baseline on plain neighbor arrays.
//! * [`CountCol`] — baseline that keeps per-vertex color counts and re-draws
//!   until it finds a free color.
//! * [`RandRCol`] — random vertex ranks; each neighborhood is split into
//!   higher- and lower-rank halves and recolors walk down the ranks.
//! * [`HierCol`] — level hierarchy; vertices rise when they have many
//!   neighbors at or below their level and recolors walk down the levels.
//!
//! All four start from the empty graph with an independent uniform color per
//! vertex, which is proper vacuously. The palette is `{0, …, Δ}` for the
//! degree bound `Δ` fixed at construction.

use rand::Rng;

use crate::graph::{UpdateOp, VertexId};
use crate::{BuildError, UpdateError};

mod count;
mod hier;
mod randr;
mod recurse;

pub use count::CountCol;
pub use hier::HierCol;
pub use randr::RandRCol;
pub use recurse::RecurseCol;

/// A vertex color in `[0, Δ]`.
pub type Color = u32;

/// Entries allowed in the Θ(nΔ) per-vertex count tables before a constructor
/// refuses to allocate them. Roughly a gigabyte of `u32` counts.
pub const DEFAULT_COUNT_BUDGET: usize = 1 << 28;

/// The color palette `{0, …, Δ}`.
#[derive(Clone, Copy, Debug)]
pub struct Palette {
    size: u32,
}

impl Palette {
    pub fn new(delta: usize) -> Palette {
        Palette {
            size: delta as u32 + 1,
        }
    }

    #[inline]
    pub fn size(&self) -> u32 {
        self.size
    }

    #[inline]
    pub fn max_color(&self) -> Color {
        self.size - 1
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Color {
        rng.random_range(0..self.size)
    }
}

/// Uniform interface over the four coloring algorithms.
pub trait DynamicColoring {
    /// Applies one edge update. The update must be valid against the current
    /// graph (the sequence validator runs upstream, not here).
    fn apply(&mut self, op: UpdateOp) -> Result<(), UpdateError>;

    fn color_of(&self, v: VertexId) -> Color;

    /// Current assignment, indexed by vertex, for oracle checkpoints.
    fn colors(&self) -> &[Color];

    /// Per-algorithm event counters for the harness. Deterministic under a
    /// fixed seed and update sequence.
    fn counters(&self) -> Vec<(&'static str, u64)>;
}

/// Draws an independent uniform palette color for every vertex.
fn initial_colors<R: Rng + ?Sized>(n: usize, palette: Palette, rng: &mut R) -> Vec<Color> {
    (0..n).map(|_| palette.sample(rng)).collect()
}

/// Guards the Θ(nΔ) count-table allocations of CountCol/RandRCol/HierCol.
fn check_count_budget(n: usize, delta: usize, budget: usize) -> Result<(), BuildError> {
    let required = n.saturating_mul(delta + 1);
    if required > budget {
        Err(BuildError::CountTableTooLarge { required, budget })
    } else {
        Ok(())
    }
}

/// One `Δ+1`-sized array of `u32` color counts per vertex. Rows are
/// addressed through a per-vertex offset table, so every access pays the
/// row lookup; the rows themselves share one arena.
#[derive(Clone, Debug)]
pub(crate) struct CountTable {
    row_start: Vec<u32>,
    counts: Vec<u32>,
}

impl CountTable {
    fn new(n: usize, palette: Palette) -> CountTable {
        let stride = palette.size() as usize;
        CountTable {
            row_start: (0..n).map(|v| (v * stride) as u32).collect(),
            counts: vec![0; n * stride],
        }
    }

    #[inline]
    fn at(&self, v: VertexId, c: Color) -> usize {
        self.row_start[v.index()] as usize + c as usize
    }

    #[inline]
    fn get(&self, v: VertexId, c: Color) -> u32 {
        self.counts[self.at(v, c)]
    }

    #[inline]
    fn inc(&mut self, v: VertexId, c: Color) {
        let at = self.at(v, c);
        self.counts[at] += 1;
    }

    #[inline]
    fn dec(&mut self, v: VertexId, c: Color) {
        let at = self.at(v, c);
        self.counts[at] -= 1;
    }

    /// Row of counts for `v`, used by consistency checks in tests.
    #[cfg(test)]
    pub(crate) fn row(&self, v: VertexId) -> &[u32] {
        let start = self.row_start[v.index()] as usize;
        &self.counts[start..start + self.counts.len() / self.row_start.len()]
    }
}
