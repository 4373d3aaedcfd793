//! Level-hierarchy coloring.
//!
//! Vertices carry a level `l(v) ≥ −1`. Every vertex keeps its neighbors
//! bucketed by their level plus a full color-count array, both maintained on
//! each update from both endpoints. A clashing insertion recolors whichever
//! endpoint was recolored more recently (never-recolored ties break toward
//! the smaller id). A recolor first moves `v` to the lowest level `ℓ` at
//! which it has fewer than `3^(ℓ+2)` neighbors of level ≤ ℓ, then draws a
//! color: at level −1 one used by no neighbor, at higher levels one used by
//! no neighbor or by exactly one strictly-lower-level neighbor, handing the
//! recolor down to that neighbor.
//!
//! The level move is always taken from the bottom upward, which keeps the
//! post-recolor threshold invariant unconditional; re-bucketing `v` in each
//! neighbor's structure on a level change is the hierarchy-maintenance cost
//! this algorithm pays that the rank-based one does not.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::graph::{FastIndexSet, UpdateKind, UpdateOp, VertexId};
use crate::{BuildError, UpdateError};

use super::{
    check_count_budget, initial_colors, Color, CountTable, DynamicColoring, Palette,
    DEFAULT_COUNT_BUDGET,
};

pub struct HierCol {
    palette: Palette,
    xi: Vec<Color>,
    level: Vec<i32>,
    /// `buckets[v][ℓ+1]` holds the neighbors of `v` currently at level `ℓ`.
    buckets: Vec<Vec<FastIndexSet<VertexId>>>,
    counts: CountTable,
    /// Monotone recolor timestamps; 0 means never recolored.
    stamp: Vec<u64>,
    clock: u64,
    max_level: i32,
    rng: ChaCha8Rng,
    scratch: Vec<VertexId>,
    recolors: u64,
    max_recolor_chain: u64,
    level_changes: u64,
}

/// Smallest level whose threshold exceeds Δ; a vertex always fits there.
fn level_cap(delta: usize) -> i32 {
    let mut l = -1i32;
    while pow3(l + 2) <= delta as u64 {
        l += 1;
    }
    l
}

fn pow3(e: i32) -> u64 {
    3u64.saturating_pow(e as u32)
}

impl HierCol {
    pub fn new(n: usize, delta: usize, seed: u64) -> Result<HierCol, BuildError> {
        HierCol::with_budget(n, delta, seed, DEFAULT_COUNT_BUDGET)
    }

    pub fn with_budget(
        n: usize,
        delta: usize,
        seed: u64,
        budget: usize,
    ) -> Result<HierCol, BuildError> {
        check_count_budget(n, delta, budget)?;
        let palette = Palette::new(delta);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xi = initial_colors(n, palette, &mut rng);
        let max_level = level_cap(delta);
        let slots = (max_level + 2) as usize;
        Ok(HierCol {
            palette,
            xi,
            level: vec![-1; n],
            buckets: vec![vec![FastIndexSet::default(); slots]; n],
            counts: CountTable::new(n, palette),
            stamp: vec![0; n],
            clock: 0,
            max_level,
            rng,
            scratch: Vec::new(),
            recolors: 0,
            max_recolor_chain: 0,
            level_changes: 0,
        })
    }

    pub fn level_of(&self, v: VertexId) -> i32 {
        self.level[v.index()]
    }

    /// Number of neighbors of `v` at level ≤ `l`.
    fn count_at_most(&self, v: VertexId, l: i32) -> u64 {
        self.buckets[v.index()][..=(l + 1) as usize]
            .iter()
            .map(|b| b.len() as u64)
            .sum()
    }

    fn set_level(&mut self, v: VertexId, new: i32) {
        let old = self.level[v.index()];
        if old == new {
            return;
        }
        self.level[v.index()] = new;
        self.level_changes += 1;
        self.scratch.clear();
        for bucket in &self.buckets[v.index()] {
            self.scratch.extend(bucket.iter().copied());
        }
        let moved = std::mem::take(&mut self.scratch);
        for &w in &moved {
            let b = &mut self.buckets[w.index()];
            b[(old + 1) as usize].swap_remove(&v);
            b[(new + 1) as usize].insert(v);
        }
        self.scratch = moved;
    }

    fn assign_color(&mut self, v: VertexId, new: Color) {
        let old = self.xi[v.index()];
        self.xi[v.index()] = new;
        self.clock += 1;
        self.stamp[v.index()] = self.clock;
        self.recolors += 1;
        for bucket in &self.buckets[v.index()] {
            for &w in bucket {
                self.counts.dec(w, old);
                self.counts.inc(w, new);
            }
        }
    }

    /// The single neighbor of `v` at a level strictly below `lvl` holding
    /// color `c`, if any. Only called when the total count of `c` is 1.
    fn holder_below(&self, v: VertexId, lvl: i32, c: Color) -> Option<VertexId> {
        self.buckets[v.index()][..(lvl + 1) as usize]
            .iter()
            .flat_map(|b| b.iter().copied())
            .find(|w| self.xi[w.index()] == c)
    }

    fn recolor_chain(&mut self, mut v: VertexId) {
        let mut chain = 0u64;
        loop {
            chain += 1;
            // Lowest level at which v sits below its threshold.
            let mut lvl = -1;
            while self.count_at_most(v, lvl) >= pow3(lvl + 2) {
                lvl += 1;
                debug_assert!(lvl <= self.max_level);
            }
            self.set_level(v, lvl);
            let mut next = None;
            let new = loop {
                let c = self.palette.sample(&mut self.rng);
                match self.counts.get(v, c) {
                    0 => break c,
                    1 if lvl >= 0 => {
                        // Admissible only if the single holder sits strictly
                        // below v; hand the recolor down to it.
                        if let Some(w) = self.holder_below(v, lvl, c) {
                            next = Some(w);
                            break c;
                        }
                    }
                    _ => {}
                }
            };
            self.assign_color(v, new);
            debug_assert!(self.count_at_most(v, self.level[v.index()])
                < pow3(self.level[v.index()] + 2));
            match next {
                Some(w) => v = w,
                None => break,
            }
        }
        self.max_recolor_chain = self.max_recolor_chain.max(chain);
    }

    #[cfg(test)]
    pub(crate) fn threshold_holds(&self, v: VertexId) -> bool {
        self.count_at_most(v, self.level[v.index()]) < pow3(self.level[v.index()] + 2)
    }
}

impl DynamicColoring for HierCol {
    fn apply(&mut self, op: UpdateOp) -> Result<(), UpdateError> {
        let e = op.edge;
        let (u, v) = (e.u(), e.v());
        match op.kind {
            UpdateKind::Insert => {
                let (lu, lv) = (self.level[u.index()], self.level[v.index()]);
                self.buckets[u.index()][(lv + 1) as usize].insert(v);
                self.buckets[v.index()][(lu + 1) as usize].insert(u);
                self.counts.inc(u, self.xi[v.index()]);
                self.counts.inc(v, self.xi[u.index()]);
                if self.xi[u.index()] == self.xi[v.index()] {
                    // Recolor the endpoint recolored more recently; vertices
                    // never recolored tie toward the smaller id.
                    let target = if self.stamp[u.index()] > self.stamp[v.index()] {
                        u
                    } else if self.stamp[v.index()] > self.stamp[u.index()] {
                        v
                    } else {
                        u
                    };
                    self.recolor_chain(target);
                }
            }
            UpdateKind::Delete => {
                let (lu, lv) = (self.level[u.index()], self.level[v.index()]);
                self.buckets[u.index()][(lv + 1) as usize].swap_remove(&v);
                self.buckets[v.index()][(lu + 1) as usize].swap_remove(&u);
                self.counts.dec(u, self.xi[v.index()]);
                self.counts.dec(v, self.xi[u.index()]);
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
            ("level_changes", self.level_changes),
        ]
    }
}
