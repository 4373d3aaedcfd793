//! Rank-based matching with per-vertex search trees keyed by eliminator rank.
//!
//! Maintains the same lexicographically first maximal matching as
//! [`super::RandR2Match`], but through the data structures that make it
//! expensive: every vertex owns an ordered map of its incident edges keyed by
//! eliminator rank `k(e) = min(π(e), k(u), k(v))` — the rank of the matching
//! edge that covers `e`, or `π(e)` for matching edges. Whenever a vertex is
//! matched or unmatched, the eliminator ranks of all its incident edges are
//! recomputed and the affected entries re-keyed in both endpoints' trees.
//! Repair scans walk the tree range `k(e) > r_v` (everything at or below the
//! popped priority is already covered) and pick the minimum-rank admissible
//! edge, which is exactly the edge the ascending-rank scan would take.

use std::collections::BTreeMap;
use std::ops::Bound;

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::graph::{EdgeKey, FastHashMap, FastHashSet, Rank, UpdateKind, UpdateOp, VertexId};
use crate::UpdateError;

use super::randr2::RepairQueue;
use super::{
    collect_matching, matched_pairs, DynamicMatching, RankedMatching,
    NO_PARTNER,
};

pub struct RandR1Match {
    /// Per-vertex incident edges ordered by `(k(e), neighbor)`, holding π(e).
    tree: Vec<BTreeMap<(Rank, VertexId), Rank>>,
    /// Current eliminator rank of every edge.
    eliminator: FastHashMap<EdgeKey, Rank>,
    pi: FastHashMap<EdgeKey, Rank>,
    used_ranks: FastHashSet<u64>,
    partner: Vec<u32>,
    vertex_rank: Vec<Rank>,
    edge_count: usize,
    rng: ChaCha8Rng,
    repair_pops: u64,
    queue_pushes: u64,
    eliminator_updates: u64,
}

impl RandR1Match {
    pub fn new(n: usize, _delta: usize, seed: u64) -> RandR1Match {
        RandR1Match {
            tree: vec![BTreeMap::new(); n],
            eliminator: FastHashMap::default(),
            pi: FastHashMap::default(),
            used_ranks: FastHashSet::default(),
            partner: vec![NO_PARTNER; n],
            vertex_rank: vec![Rank::INFINITY; n],
            edge_count: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            repair_pops: 0,
            queue_pushes: 0,
            eliminator_updates: 0,
        }
    }

    pub fn eliminator_of(&self, e: EdgeKey) -> Option<Rank> {
        self.eliminator.get(&e).copied()
    }

    pub fn rank_of(&self, e: EdgeKey) -> Option<Rank> {
        self.pi.get(&e).copied()
    }

    pub fn vertex_rank_of(&self, v: VertexId) -> Rank {
        self.vertex_rank[v.index()]
    }

    fn draw_unique_rank(&mut self) -> Rank {
        loop {
            let r = Rank::draw(&mut self.rng);
            if self.used_ranks.insert(r.key()) {
                return r;
            }
        }
    }

    fn eliminator_for(&self, e: EdgeKey, pi_e: Rank) -> Rank {
        pi_e.min(self.vertex_rank[e.u().index()])
            .min(self.vertex_rank[e.v().index()])
    }

    /// Updates the eliminator rank of every incident edge of `x` after
    /// `k(x)` changed, re-keying each entry in both endpoints' trees. The
    /// whole neighborhood gets touched whether or not an individual key
    /// moves; these tree-update storms are what make this algorithm slow.
    fn refresh_incident(&mut self, x: VertexId) {
        let entries: Vec<((Rank, VertexId), Rank)> = self
            .tree[x.index()]
            .iter()
            .map(|(&key, &pi_e)| (key, pi_e))
            .collect();
        for ((old_k, w), pi_e) in entries {
            let e = EdgeKey::new(x, w).expect("tree self-loop");
            let new_k = self.eliminator_for(e, pi_e);
            self.tree[x.index()].remove(&(old_k, w));
            self.tree[x.index()].insert((new_k, w), pi_e);
            self.tree[w.index()].remove(&(old_k, x));
            self.tree[w.index()].insert((new_k, x), pi_e);
            self.eliminator.insert(e, new_k);
            self.eliminator_updates += 1;
        }
    }

    fn set_vertex_rank(&mut self, x: VertexId, new: Rank) {
        if self.vertex_rank[x.index()] != new {
            self.vertex_rank[x.index()] = new;
            self.refresh_incident(x);
        }
    }

    fn evict_partner_of(&mut self, x: VertexId, queue: &mut RepairQueue) {
        let p = self.partner[x.index()];
        if p != NO_PARTNER {
            let p = VertexId(p);
            let lost = self.vertex_rank[p.index()];
            queue.push(p, lost);
            self.partner[p.index()] = NO_PARTNER;
            self.set_vertex_rank(p, Rank::INFINITY);
        }
    }

    fn set_matched(&mut self, a: VertexId, b: VertexId, rank: Rank) {
        self.partner[a.index()] = b.0;
        self.partner[b.index()] = a.0;
        self.set_vertex_rank(a, rank);
        self.set_vertex_rank(b, rank);
    }

    fn find_new_partners(&mut self, mut queue: RepairQueue) {
        let budget = self.edge_count + queue.len();
        let mut pops = 0u64;
        while let Some((v, r_v)) = queue.pop() {
            pops += 1;
            assert!(
                pops as usize <= budget,
                "repair loop exceeded its m + |S| iteration bound"
            );
            let k_v = self.vertex_rank[v.index()];
            // Admissible edges all have k(e) > r_v; among them take the
            // minimum π with r_v < π < k(v) and π < k(w).
            let mut chosen: Option<(Rank, VertexId)> = None;
            let range = (
                Bound::Excluded((r_v, VertexId(u32::MAX))),
                Bound::Unbounded,
            );
            for (&(_, w), &pi_e) in self.tree[v.index()].range(range) {
                if pi_e > r_v
                    && pi_e < k_v
                    && pi_e < self.vertex_rank[w.index()]
                    && chosen.is_none_or(|(best, _)| pi_e < best)
                {
                    chosen = Some((pi_e, w));
                }
            }
            if let Some((r, w)) = chosen {
                self.evict_partner_of(w, &mut queue);
                self.evict_partner_of(v, &mut queue);
                self.set_matched(v, w, r);
            }
        }
        self.repair_pops += pops;
        self.queue_pushes += queue.pushes;
    }

    fn insert_edge(&mut self, e: EdgeKey, rank: Rank) {
        let (u, v) = (e.u(), e.v());
        let k_e = self.eliminator_for(e, rank);
        self.pi.insert(e, rank);
        self.eliminator.insert(e, k_e);
        self.tree[u.index()].insert((k_e, v), rank);
        self.tree[v.index()].insert((k_e, u), rank);
        self.edge_count += 1;
        let mut queue = RepairQueue::new();
        if rank < self.vertex_rank[u.index()] && rank < self.vertex_rank[v.index()] {
            self.evict_partner_of(v, &mut queue);
            self.evict_partner_of(u, &mut queue);
            self.set_matched(u, v, rank);
        }
        self.find_new_partners(queue);
    }

    fn delete_edge(&mut self, e: EdgeKey) {
        let (u, v) = (e.u(), e.v());
        let rank = self.pi.remove(&e).expect("delete of absent edge");
        let k_e = self
            .eliminator
            .remove(&e)
            .expect("edge missing an eliminator rank");
        self.tree[u.index()].remove(&(k_e, v));
        self.tree[v.index()].remove(&(k_e, u));
        self.edge_count -= 1;
        let mut queue = RepairQueue::new();
        if self.partner[v.index()] == u.0 {
            self.partner[u.index()] = NO_PARTNER;
            self.partner[v.index()] = NO_PARTNER;
            // All incident edges with k(e') ≥ π(e) get re-examined: the rank
            // reset re-keys them and the repair entries start at π(e).
            self.set_vertex_rank(u, Rank::INFINITY);
            self.set_vertex_rank(v, Rank::INFINITY);
            queue.push(u, rank);
            queue.push(v, rank);
        }
        self.find_new_partners(queue);
    }
}

impl DynamicMatching for RandR1Match {
    fn apply(&mut self, op: UpdateOp) -> Result<(), UpdateError> {
        match op.kind {
            UpdateKind::Insert => {
                let rank = self.draw_unique_rank();
                self.insert_edge(op.edge, rank);
            }
            UpdateKind::Delete => self.delete_edge(op.edge),
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
            ("repair_pops", self.repair_pops),
            ("queue_pushes", self.queue_pushes),
            ("eliminator_updates", self.eliminator_updates),
        ]
    }
}

impl RankedMatching for RandR1Match {
    fn edge_ranks(&self) -> Vec<(EdgeKey, Rank)> {
        let mut ranked: Vec<_> = self.pi.iter().map(|(&e, &r)| (e, r)).collect();
        ranked.sort_unstable_by_key(|&(e, _)| e);
        ranked
    }

    fn insert_ranked(&mut self, e: EdgeKey, rank: Rank) {
        assert!(
            self.used_ranks.insert(rank.key()),
            "forced rank {rank:?} already in use"
        );
        self.insert_edge(e, rank);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge;
    use crate::oracle::greedy_lfmm;

    fn rank(x: f64) -> Rank {
        Rank::new(x).unwrap()
    }

    #[test]
    fn first_matching_edge_is_its_own_eliminator() {
        let mut algo = RandR1Match::new(2, 1, 0);
        algo.insert_ranked(edge(0, 1), rank(0.4));
        assert_eq!(algo.matching(), vec![edge(0, 1)]);
        assert_eq!(algo.eliminator_of(edge(0, 1)), Some(rank(0.4)));
    }

    #[test]
    fn path_rank_pattern_insert_any_order() {
        // Ranks 0.3, 0.1, 0.2 on the path edges 0-1, 1-2, 2-3 give the LFMM
        // {(1,2)} regardless of the insertion order.
        let labeled = [
            (edge(0, 1), rank(0.3)),
            (edge(1, 2), rank(0.1)),
            (edge(2, 3), rank(0.2)),
        ];
        let orders: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for order in orders {
            let mut algo = RandR1Match::new(4, 3, 0);
            for i in order {
                let (e, r) = labeled[i];
                algo.insert_ranked(e, r);
            }
            assert_eq!(algo.matching(), vec![edge(1, 2)]);
            // Covered edges carry the rank of the matching edge that covers
            // them.
            assert_eq!(algo.eliminator_of(edge(0, 1)), Some(rank(0.1)));
            assert_eq!(algo.eliminator_of(edge(2, 3)), Some(rank(0.1)));
        }
    }

    #[test]
    fn delete_of_matching_edge_repairs() {
        let mut algo = RandR1Match::new(4, 3, 0);
        algo.insert_ranked(edge(0, 1), rank(0.3));
        algo.insert_ranked(edge(1, 2), rank(0.1));
        algo.insert_ranked(edge(2, 3), rank(0.2));
        algo.apply(UpdateOp::delete(edge(1, 2))).unwrap();
        assert_eq!(algo.matching(), vec![edge(0, 1), edge(2, 3)]);
        assert_eq!(algo.eliminator_of(edge(0, 1)), Some(rank(0.3)));
        assert_eq!(algo.eliminator_of(edge(2, 3)), Some(rank(0.2)));
    }

    #[test]
    fn agrees_with_greedy_oracle_under_random_churn() {
        use rand::Rng;
        let n = 20u32;
        let mut algo = RandR1Match::new(n as usize, (n - 1) as usize, 3);
        let mut live: Vec<EdgeKey> = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..1200 {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a == b {
                continue;
            }
            let e = edge(a, b);
            if let Some(pos) = live.iter().position(|&x| x == e) {
                live.swap_remove(pos);
                algo.apply(UpdateOp::delete(e)).unwrap();
            } else {
                live.push(e);
                algo.apply(UpdateOp::insert(e)).unwrap();
            }
            assert_eq!(
                algo.matching(),
                greedy_lfmm(n as usize, &algo.edge_ranks()).unwrap()
            );
            // Eliminator invariant: k(e) = π(e) on matching edges and the
            // covering rank elsewhere.
            let match_set: std::collections::HashSet<EdgeKey> =
                algo.matching().into_iter().collect();
            for &(e, pi_e) in &algo.edge_ranks() {
                let k_e = algo.eliminator_of(e).unwrap();
                if match_set.contains(&e) {
                    assert_eq!(k_e, pi_e);
                } else {
                    let cover = algo.vertex_rank[e.u().index()]
                        .min(algo.vertex_rank[e.v().index()]);
                    assert_eq!(k_e, cover.min(pi_e));
                    assert!(k_e < pi_e, "uncovered non-matching edge");
                }
            }
        }
    }
}
