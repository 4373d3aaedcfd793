//! Log-level hierarchy matching with lazily maintained levels.
//!
//! Levels run from −1 (unmatched) to ⌈log₂ n⌉. Unlike the two-level
//! variant, a level change does not touch the neighbors' structures right
//! away; entries go stale and are re-bucketed in a batch when a vertex next
//! searches for a partner. A freed vertex `v` that was matched at level `ℓ`
//! first batch-fixes its own buckets, then either steals a uniformly random
//! neighbor of level < `ℓ` (when it has at least `2^(ℓ+1)` of them, rising
//! to ⌊log₂ |O_v|⌋) or searches the bottom bucket for a free partner and
//! matches at level 0. Steal victims come from strictly lower levels, so
//! eviction chains descend and terminate.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::graph::{EdgeKey, FastIndexSet, UpdateKind, UpdateOp, VertexId};
use crate::UpdateError;

use super::{
    collect_matching, matched_pairs, DynamicMatching, NO_PARTNER,
};

pub struct Hier2Match {
    /// `buckets[v][b]` holds neighbors last seen at level `b−1`; entries may
    /// be stale until the next sweep of `v`.
    buckets: Vec<Vec<FastIndexSet<VertexId>>>,
    level: Vec<i16>,
    partner: Vec<u32>,
    max_level: i16,
    rng: ChaCha8Rng,
    settles: u64,
    steals: u64,
    level_changes: u64,
    bucket_moves: u64,
}

impl Hier2Match {
    pub fn new(n: usize, _delta: usize, seed: u64) -> Hier2Match {
        let max_level = (usize::BITS - n.max(2).leading_zeros()) as i16; // ⌈log₂ n⌉ for n ≥ 2
        let slots = (max_level + 2) as usize;
        Hier2Match {
            buckets: vec![vec![FastIndexSet::default(); slots]; n],
            level: vec![-1; n],
            partner: vec![NO_PARTNER; n],
            max_level,
            rng: ChaCha8Rng::seed_from_u64(seed),
            settles: 0,
            steals: 0,
            level_changes: 0,
            bucket_moves: 0,
        }
    }

    pub fn level_of(&self, v: VertexId) -> i16 {
        self.level[v.index()]
    }

    fn set_level(&mut self, v: VertexId, new: i16) {
        if self.level[v.index()] != new {
            self.level[v.index()] = new;
            self.level_changes += 1;
        }
    }

    /// Batched re-bucketing: move every stale entry of `v` to the bucket of
    /// its current level. This is the deferred half of the lazy scheme.
    fn sweep(&mut self, v: VertexId) {
        let bs = &mut self.buckets[v.index()];
        for b in 0..bs.len() {
            let mut i = 0;
            while i < bs[b].len() {
                let w = *bs[b].get_index(i).unwrap();
                let actual = (self.level[w.index()] + 1) as usize;
                if actual != b {
                    bs[b].swap_remove_index(i);
                    bs[actual].insert(w);
                    self.bucket_moves += 1;
                } else {
                    i += 1;
                }
            }
        }
    }

    /// Removes `w` from `v`'s buckets wherever it currently sits.
    fn remove_entry(&mut self, v: VertexId, w: VertexId) {
        let bs = &mut self.buckets[v.index()];
        let guess = (self.level[w.index()] + 1) as usize;
        if !bs[guess].swap_remove(&w) {
            for b in bs.iter_mut() {
                if b.swap_remove(&w) {
                    return;
                }
            }
            panic!("neighbor {w} missing from all buckets of {v}");
        }
    }

    fn set_match(&mut self, a: VertexId, b: VertexId, lvl: i16) {
        self.partner[a.index()] = b.0;
        self.partner[b.index()] = a.0;
        self.set_level(a, lvl);
        self.set_level(b, lvl);
    }

    fn settle(&mut self, v: VertexId, at_level: i16) {
        self.settles += 1;
        self.sweep(v);
        let o_size: usize = self.buckets[v.index()][..(at_level + 1) as usize]
            .iter()
            .map(|b| b.len())
            .sum();
        let steal_bar = 1usize << ((at_level + 1) as u32).min(30);
        if o_size >= steal_bar.max(2) {
            // Rise and steal a uniformly random lower neighbor.
            let mut i = self.rng.random_range(0..o_size);
            let mut chosen = None;
            for b in &self.buckets[v.index()][..(at_level + 1) as usize] {
                if i < b.len() {
                    chosen = Some(*b.get_index(i).unwrap());
                    break;
                }
                i -= b.len();
            }
            let w = chosen.unwrap();
            self.steals += 1;
            let new_level = (o_size.ilog2() as i16).min(self.max_level);
            let victim = self.partner[w.index()];
            let victim_level = self.level[w.index()];
            self.set_match(v, w, new_level);
            if victim != NO_PARTNER {
                let victim = VertexId(victim);
                self.partner[victim.index()] = NO_PARTNER;
                self.settle(victim, victim_level);
            }
        } else {
            // After the sweep the bottom bucket holds exactly the level −1
            // neighbors, which are the free ones.
            let found = self.buckets[v.index()][0]
                .iter()
                .copied()
                .find(|w| self.partner[w.index()] == NO_PARTNER);
            match found {
                Some(w) => self.set_match(v, w, 0),
                None => self.set_level(v, -1),
            }
        }
    }
}

impl DynamicMatching for Hier2Match {
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
                self.remove_entry(u, v);
                self.remove_entry(v, u);
                if self.partner[u.index()] == v.0 {
                    let (lu, lv) = (self.level[u.index()], self.level[v.index()]);
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
            ("bucket_moves", self.bucket_moves),
        ]
    }
}
