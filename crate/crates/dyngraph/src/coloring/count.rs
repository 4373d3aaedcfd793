//! Counting baseline.
//!
//! Keeps, for every vertex, an array of Δ+1 neighbor color counts. A clashing
//! insertion recolors a uniformly chosen endpoint by re-drawing palette colors
//! until one has a zero count; a free color always exists because the palette
//! is one larger than the degree bound. The recolor then walks the whole
//! neighborhood once to fix up the neighbors' count arrays, which makes these
//! recolors expensive exactly when they are frequent.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use rand::Rng;

use crate::graph::{SwapDeleteAdjacency, UpdateKind, UpdateOp, VertexId};
use crate::{BuildError, UpdateError};

use super::{
    check_count_budget, initial_colors, Color, CountTable, DynamicColoring, Palette,
    DEFAULT_COUNT_BUDGET,
};

pub struct CountCol {
    palette: Palette,
    xi: Vec<Color>,
    adj: SwapDeleteAdjacency,
    counts: CountTable,
    rng: ChaCha8Rng,
    recolors: u64,
    color_draws: u64,
}

impl CountCol {
    pub fn new(n: usize, delta: usize, seed: u64) -> Result<CountCol, BuildError> {
        CountCol::with_budget(n, delta, seed, DEFAULT_COUNT_BUDGET)
    }

    pub fn with_budget(
        n: usize,
        delta: usize,
        seed: u64,
        budget: usize,
    ) -> Result<CountCol, BuildError> {
        check_count_budget(n, delta, budget)?;
        let palette = Palette::new(delta);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xi = initial_colors(n, palette, &mut rng);
        Ok(CountCol {
            palette,
            xi,
            adj: SwapDeleteAdjacency::new(n),
            counts: CountTable::new(n, palette),
            rng,
            recolors: 0,
            color_draws: 0,
        })
    }

    fn recolor(&mut self, v: VertexId) {
        let old = self.xi[v.index()];
        let new = loop {
            let c = self.palette.sample(&mut self.rng);
            self.color_draws += 1;
            if self.counts.get(v, c) == 0 {
                break c;
            }
        };
        self.xi[v.index()] = new;
        for &w in self.adj.neighbors(v) {
            self.counts.dec(w, old);
            self.counts.inc(w, new);
        }
        self.recolors += 1;
    }

    #[cfg(test)]
    pub(crate) fn count_row(&self, v: VertexId) -> &[u32] {
        self.counts.row(v)
    }
}

impl DynamicColoring for CountCol {
    fn apply(&mut self, op: UpdateOp) -> Result<(), UpdateError> {
        let e = op.edge;
        let (u, v) = (e.u(), e.v());
        match op.kind {
            UpdateKind::Insert => {
                self.adj.insert(e);
                self.counts.inc(u, self.xi[v.index()]);
                self.counts.inc(v, self.xi[u.index()]);
                if self.xi[u.index()] == self.xi[v.index()] {
                    let target = if self.rng.random_bool(0.5) { u } else { v };
                    self.recolor(target);
                }
            }
            UpdateKind::Delete => {
                self.adj.remove(e).expect("delete of absent edge");
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
            ("color_draws", self.color_draws),
        ]
    }
}
