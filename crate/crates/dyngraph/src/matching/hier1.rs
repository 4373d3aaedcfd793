//! Two-level hierarchy matching.
//!
//! Levels are −1 (unmatched), 0, and 1. Each vertex keeps its neighbors in
//! hash sets bucketed by their level, maintained eagerly: whenever a vertex
//! changes level it re-buckets itself in every neighbor's structure. A
//! freed vertex `v` looks at `O_v`, its neighbors of lower level. With
//! fewer than √n of them it searches `O_v` for a free partner and matches at
//! level 0; with at least √n it rises to level 1, picks a uniformly random
//! `w ∈ O_v` (matched or not) and steals it, after which the evicted partner
//! is settled the same way. Steal victims always come from level-0 pairs, so
//! eviction chains die out after one hand-off.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::graph::{EdgeKey, FastIndexSet, UpdateKind, UpdateOp, VertexId};
use crate::UpdateError;

use super::{
    collect_matching, matched_pairs, DynamicMatching, NO_PARTNER,
};

pub struct Hier1Match {
    /// `buckets[v][ℓ+1]` holds the neighbors of `v` currently at level `ℓ`.
    buckets: Vec<[FastIndexSet<VertexId>; 3]>,
    level: Vec<i8>,
    partner: Vec<u32>,
    threshold: usize,
    rng: ChaCha8Rng,
    settles: u64,
    steals: u64,
    level_changes: u64,
}

impl Hier1Match {
    pub fn new(n: usize, _delta: usize, seed: u64) -> Hier1Match {
        let threshold = (n as f64).sqrt().ceil().max(1.0) as usize;
        Hier1Match::with_threshold(n, seed, threshold)
    }

    pub fn with_threshold(n: usize, seed: u64, threshold: usize) -> Hier1Match {
        Hier1Match {
            buckets: (0..n).map(|_| Default::default()).collect(),
            level: vec![-1; n],
            partner: vec![NO_PARTNER; n],
            threshold,
            rng: ChaCha8Rng::seed_from_u64(seed),
            settles: 0,
            steals: 0,
            level_changes: 0,
        }
    }

    pub fn level_of(&self, v: VertexId) -> i8 {
        self.level[v.index()]
    }

    fn set_level(&mut self, v: VertexId, new: i8) {
        let old = self.level[v.index()];
        if old == new {
            return;
        }
        self.level[v.index()] = new;
        self.level_changes += 1;
        let neighbors: Vec<VertexId> = self.buckets[v.index()]
            .iter()
            .flat_map(|b| b.iter().copied())
            .collect();
        for w in neighbors {
            let b = &mut self.buckets[w.index()];
            b[(old + 1) as usize].swap_remove(&v);
            b[(new + 1) as usize].insert(v);
        }
    }

    fn set_match(&mut self, a: VertexId, b: VertexId, lvl: i8) {
        self.partner[a.index()] = b.0;
        self.partner[b.index()] = a.0;
        self.set_level(a, lvl);
        self.set_level(b, lvl);
    }

    fn lower_neighbor_count(&self, v: VertexId, at_level: i8) -> usize {
        self.buckets[v.index()][..(at_level + 1) as usize]
            .iter()
            .map(|b| b.len())
            .sum()
    }

    /// The `i`-th element of `O_v`, counting through the level buckets from
    /// the bottom.
    fn lower_neighbor_at(&self, v: VertexId, at_level: i8, mut i: usize) -> VertexId {
        for b in &self.buckets[v.index()][..(at_level + 1) as usize] {
            if i < b.len() {
                return *b.get_index(i).unwrap();
            }
            i -= b.len();
        }
        unreachable!("index out of range of O_v")
    }

    /// Finds a new partner for `v`, which was matched at `at_level` and has
    /// just been freed.
    fn settle(&mut self, v: VertexId, at_level: i8) {
        self.settles += 1;
        let o_size = self.lower_neighbor_count(v, at_level);
        if o_size >= self.threshold {
            // Rise to level 1 and steal a random lower neighbor.
            let pick = self.rng.random_range(0..o_size);
            let w = self.lower_neighbor_at(v, at_level, pick);
            self.steals += 1;
            let victim = self.partner[w.index()];
            let victim_level = self.level[w.index()];
            self.set_match(v, w, 1);
            if victim != NO_PARTNER {
                let victim = VertexId(victim);
                self.partner[victim.index()] = NO_PARTNER;
                self.settle(victim, victim_level);
            }
        } else {
            // Few lower neighbors: search them for a free partner.
            let found = self.buckets[v.index()][..(at_level + 1) as usize]
                .iter()
                .flat_map(|b| b.iter().copied())
                .find(|w| self.partner[w.index()] == NO_PARTNER);
            match found {
                Some(w) => self.set_match(v, w, 0),
                None => self.set_level(v, -1),
            }
        }
    }
}

impl DynamicMatching for Hier1Match {
    fn apply(&mut self, op: UpdateOp) -> Result<(), UpdateError> {
        let e = op.edge;
        let (u, v) = (e.u(), e.v());
        match op.kind {
            UpdateKind::Insert => {
                let (lu, lv) = (self.level[u.index()], self.level[v.index()]);
                self.buckets[u.index()][(lv + 1) as usize].insert(v);
                self.buckets[v.index()][(lu + 1) as usize].insert(u);
                if lu == -1 && lv == -1 {
                    self.set_match(u, v, 0);
                }
            }
            UpdateKind::Delete => {
                let (lu, lv) = (self.level[u.index()], self.level[v.index()]);
                self.buckets[u.index()][(lv + 1) as usize].swap_remove(&v);
                self.buckets[v.index()][(lu + 1) as usize].swap_remove(&u);
                if self.partner[u.index()] == v.0 {
                    self.partner[u.index()] = NO_PARTNER;
                    self.partner[v.index()] = NO_PARTNER;
                    self.settle(u, lu);
                    // u's eviction chain may already have re-matched v.
                    if self.partner[v.index()] == NO_PARTNER {
                        self.settle(v, lv);
                    }
                }
            }
        }
        Ok(())
    }

    fn partner_of(&self, v: VertexId) -> Option<VertexId> {
        match self.partner[v.index()] {
            NO_PARTNER => None,
            p => Some(VertexId(p)),
        }
    }

    fn matching(&self) -> Vec<EdgeKey> {
        collect_matching(&self.partner)
    }

    fn matching_size(&self) -> usize {
        matched_pairs(&self.partner)
    }

    fn counters(&self) -> Vec<(&'static str, u64)> {
        vec![
            ("settles", self.settles),
            ("steals", self.steals),
            ("level_changes", self.level_changes),
        ]
    }
}
