//! Random-vertex-rank coloring.
//!
//! Every vertex draws a distinct rank `r(v) ∈ (0,1)` at construction, fixed
//! for the whole run. Each neighborhood is partitioned into the higher-rank
//! half `H_v` and the lower-rank half `L_v`, with a color-count array for
//! each half. A clashing insertion recolors the higher-rank endpoint. The
//! recolor draws palette colors until it finds one unused in `H_v` and used
//! at most once in `L_v`; a single lower conflict hands the recolor down to
//! that neighbor, so chains walk strictly down the ranks and terminate.

use std::collections::HashSet;

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::graph::{FastIndexSet, Rank, UpdateKind, UpdateOp, VertexId};
use crate::{BuildError, UpdateError};

use super::{
    check_count_budget, initial_colors, Color, CountTable, DynamicColoring, Palette,
    DEFAULT_COUNT_BUDGET,
};

pub struct RandRCol {
    palette: Palette,
    xi: Vec<Color>,
    rank: Vec<Rank>,
    hi: Vec<FastIndexSet<VertexId>>,
    lo: Vec<FastIndexSet<VertexId>>,
    hi_counts: CountTable,
    lo_counts: CountTable,
    rng: ChaCha8Rng,
    recolors: u64,
    max_recolor_chain: u64,
}

impl RandRCol {
    pub fn new(n: usize, delta: usize, seed: u64) -> Result<RandRCol, BuildError> {
        RandRCol::with_budget(n, delta, seed, DEFAULT_COUNT_BUDGET)
    }

    pub fn with_budget(
        n: usize,
        delta: usize,
        seed: u64,
        budget: usize,
    ) -> Result<RandRCol, BuildError> {
        // Two count tables, one per neighborhood half.
        check_count_budget(n, delta, budget / 2)?;
        let palette = Palette::new(delta);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xi = initial_colors(n, palette, &mut rng);
        // Distinct ranks: re-draw on collision.
        let mut seen = HashSet::with_capacity(n);
        let rank = (0..n)
            .map(|_| loop {
                let r = Rank::draw(&mut rng);
                if seen.insert(r.key()) {
                    return r;
                }
            })
            .collect();
        Ok(RandRCol {
            palette,
            xi,
            rank,
            hi: vec![FastIndexSet::default(); n],
            lo: vec![FastIndexSet::default(); n],
            hi_counts: CountTable::new(n, palette),
            lo_counts: CountTable::new(n, palette),
            rng,
            recolors: 0,
            max_recolor_chain: 0,
        })
    }

    pub fn rank_of(&self, v: VertexId) -> Rank {
        self.rank[v.index()]
    }

    /// Recolor chain starting at `v`; each hop moves to a strictly
    /// lower-ranked vertex.
    fn recolor_chain(&mut self, mut v: VertexId) {
        let mut chain = 0u64;
        loop {
            chain += 1;
            self.recolors += 1;
            let old = self.xi[v.index()];
            let new = loop {
                let c = self.palette.sample(&mut self.rng);
                if self.hi_counts.get(v, c) == 0 && self.lo_counts.get(v, c) <= 1 {
                    break c;
                }
            };
            let conflicted = self.lo_counts.get(v, new) == 1;
            self.xi[v.index()] = new;
            // v sits in L_w for every w ∈ H_v and in H_w for every w ∈ L_v.
            for &w in &self.hi[v.index()] {
                self.lo_counts.dec(w, old);
                self.lo_counts.inc(w, new);
            }
            for &w in &self.lo[v.index()] {
                self.hi_counts.dec(w, old);
                self.hi_counts.inc(w, new);
            }
            if conflicted {
                let w = self.lo[v.index()]
                    .iter()
                    .copied()
                    .find(|w| self.xi[w.index()] == new)
                    .expect("lo count promised a conflicting lower neighbor");
                debug_assert!(self.rank[w.index()] < self.rank[v.index()]);
                v = w;
            } else {
                break;
            }
        }
        self.max_recolor_chain = self.max_recolor_chain.max(chain);
    }

    #[cfg(test)]
    pub(crate) fn halves(&self, v: VertexId) -> (&FastIndexSet<VertexId>, &FastIndexSet<VertexId>) {
        (&self.hi[v.index()], &self.lo[v.index()])
    }

    #[cfg(test)]
    pub(crate) fn count_rows(&self, v: VertexId) -> (&[u32], &[u32]) {
        (self.hi_counts.row(v), self.lo_counts.row(v))
    }
}

impl DynamicColoring for RandRCol {
    fn apply(&mut self, op: UpdateOp) -> Result<(), UpdateError> {
        let e = op.edge;
        let (u, v) = (e.u(), e.v());
        // Orient the pair as (lo, hi) by rank; ranks are distinct.
        let (lo, hi) = if self.rank[u.index()] < self.rank[v.index()] {
            (u, v)
        } else {
            (v, u)
        };
        match op.kind {
            UpdateKind::Insert => {
                self.hi[lo.index()].insert(hi);
                self.hi_counts.inc(lo, self.xi[hi.index()]);
                self.lo[hi.index()].insert(lo);
                self.lo_counts.inc(hi, self.xi[lo.index()]);
                if self.xi[u.index()] == self.xi[v.index()] {
                    self.recolor_chain(hi);
                }
            }
            UpdateKind::Delete => {
                self.hi[lo.index()].swap_remove(&hi);
                self.hi_counts.dec(lo, self.xi[hi.index()]);
                self.lo[hi.index()].swap_remove(&lo);
                self.lo_counts.dec(hi, self.xi[lo.index()]);
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
            ("max_recolor_chain", self.max_recolor_chain),
        ]
    }
}
