//! Recolor-and-cascade baseline.
//!
//! Neighborhoods live in swap-delete arrays. A clashing insertion recolors a
//! uniformly chosen endpoint with a uniform palette color and then recursively
//! recolors every neighbor that now shares the new color. Deletions and
//! non-clashing insertions never recolor. Fast when free colors are
//! plentiful; the cascade can run away when the average degree approaches Δ,
//! so its depth is capped and overflowing the cap aborts the update.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::graph::{SwapDeleteAdjacency, UpdateKind, UpdateOp, VertexId};
use crate::UpdateError;

use super::{initial_colors, Color, DynamicColoring, Palette};

/// Default bound on the recursion depth of a recolor cascade.
pub const DEFAULT_CASCADE_CAP: usize = 1_000_000;

pub struct RecurseCol {
    palette: Palette,
    xi: Vec<Color>,
    adj: SwapDeleteAdjacency,
    rng: ChaCha8Rng,
    cascade_cap: usize,
    recolors: u64,
    max_cascade_depth: u64,
}

impl RecurseCol {
    pub fn new(n: usize, delta: usize, seed: u64) -> RecurseCol {
        RecurseCol::with_cascade_cap(n, delta, seed, DEFAULT_CASCADE_CAP)
    }

    pub fn with_cascade_cap(n: usize, delta: usize, seed: u64, cap: usize) -> RecurseCol {
        let palette = Palette::new(delta);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xi = initial_colors(n, palette, &mut rng);
        RecurseCol {
            palette,
            xi,
            adj: SwapDeleteAdjacency::new(n),
            rng,
            cascade_cap: cap,
            recolors: 0,
            max_cascade_depth: 0,
        }
    }

    /// Depth-first cascade, with the recursion made explicit so the cap is a
    /// reported error instead of a blown stack. Each frame re-reads the
    /// current color of its vertex, exactly as the recursive form would.
    fn cascade(&mut self, root: VertexId) -> Result<(), UpdateError> {
        let mut stack: Vec<(VertexId, usize)> = Vec::new();
        self.recolor(root);
        stack.push((root, 0));
        while let Some(&(v, next)) = stack.last() {
            self.max_cascade_depth = self.max_cascade_depth.max(stack.len() as u64);
            let neighbors = self.adj.neighbors(v);
            let mut child = None;
            let mut idx = next;
            while idx < neighbors.len() {
                let w = neighbors[idx];
                idx += 1;
                if self.xi[w.index()] == self.xi[v.index()] {
                    child = Some(w);
                    break;
                }
            }
            stack.last_mut().unwrap().1 = idx;
            match child {
                Some(w) => {
                    if stack.len() >= self.cascade_cap {
                        return Err(UpdateError::CascadeDepthExceeded {
                            cap: self.cascade_cap,
                        });
                    }
                    self.recolor(w);
                    stack.push((w, 0));
                }
                None => {
                    stack.pop();
                }
            }
        }
        Ok(())
    }

    fn recolor(&mut self, v: VertexId) {
        self.xi[v.index()] = self.palette.sample(&mut self.rng);
        self.recolors += 1;
    }
}

impl DynamicColoring for RecurseCol {
    fn apply(&mut self, op: UpdateOp) -> Result<(), UpdateError> {
        let e = op.edge;
        match op.kind {
            UpdateKind::Insert => {
                self.adj.insert(e);
                if self.xi[e.u().index()] == self.xi[e.v().index()] {
                    let target = if self.rng.random_bool(0.5) { e.u() } else { e.v() };
                    self.cascade(target)?;
                }
            }
            UpdateKind::Delete => {
                self.adj.remove(e).expect("delete of absent edge");
            }
        }
        Ok(())
    }

    fn color_of(&self, v: VertexId) -> Color {
        self.xi[v.index()]
    }

    fn colors(&self) -> &[Color] {
        &self.xi
    }

    fn counters(&self) -> Vec<(&'static str, u64)> {
        vec![
            ("recolors", self.recolors),
            ("max_cascade_depth", self.max_cascade_depth),
        ]
    }
}
