//! Rank-based matching over lazy rank-sorted neighbor arrays.
//!
//! Every inserted edge draws a unique rank `π(e) ∈ (0,1)` and the algorithm
//! maintains the lexicographically first maximal matching induced by the
//! ranks: a non-matching edge is always covered by an incident matching edge
//! of smaller rank. Each vertex keeps `P(v)` (its partner) and `k(v)` (the
//! rank of its matching edge, `∞` when free). Neighbors live in a
//! [`LazyRankedAdjacency`], ordered by rank and never re-keyed when the
//! matching changes — that is the whole point of this variant.
//!
//! An insertion with `π(e) < min(k(u), k(v))` enters the matching and evicts
//! the endpoints' previous partners into a min-priority repair queue, keyed
//! by the rank of the matching edge they just lost. Deleting a matching edge
//! enqueues both endpoints at its rank. The repair loop pops the
//! lowest-priority vertex `v` with priority `r_v` and scans its neighbors in
//! ascending rank order over the window `r_v < π(v,w) < k(v)`; the first `w`
//! with `π(v,w) < k(w)` is matched (evicting current partners of `w` and of
//! `v` back into the queue) and the loop moves on. A popped vertex may have
//! been re-matched in the meantime, which the `k(v)` window bound handles.
//!
//! Queue pops are checked against the `m + |S₀|` iteration bound: every pop
//! beyond the initial entries corresponds to an eviction, and an edge can be
//! evicted at most once per repair.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::graph::{
    EdgeKey, FastHashMap, FastHashSet, LazyRankedAdjacency, Rank, UpdateKind, UpdateOp, VertexId,
};
use crate::UpdateError;

use super::{
    collect_matching, matched_pairs, DynamicMatching, RankedMatching,
    NO_PARTNER,
};

/// Min-priority queue of `(vertex, rank)` repair entries; ties break toward
/// the smaller vertex id. Duplicates are allowed, stale pops are harmless.
pub(crate) struct RepairQueue {
    heap: BinaryHeap<Reverse<(Rank, VertexId)>>,
    pub(crate) pushes: u64,
}

impl RepairQueue {
    pub(crate) fn new() -> RepairQueue {
        RepairQueue {
            heap: BinaryHeap::new(),
            pushes: 0,
        }
    }

    pub(crate) fn push(&mut self, v: VertexId, priority: Rank) {
        self.heap.push(Reverse((priority, v)));
        self.pushes += 1;
    }

    pub(crate) fn pop(&mut self) -> Option<(VertexId, Rank)> {
        self.heap.pop().map(|Reverse((r, v))| (v, r))
    }

    pub(crate) fn len(&self) -> usize {
        self.heap.len()
    }
}

pub struct RandR2Match {
    adj: LazyRankedAdjacency,
    pi: FastHashMap<EdgeKey, Rank>,
    /// Every rank ever drawn; ranks are never reused, so pending tombstones
    /// in the lazy arrays can never collide with a fresh edge.
    used_ranks: FastHashSet<u64>,
    partner: Vec<u32>,
    /// `k(v)`: rank of the incident matching edge, `∞` if unmatched.
    vertex_rank: Vec<Rank>,
    edge_count: usize,
    rng: ChaCha8Rng,
    repair_pops: u64,
    queue_pushes: u64,
    max_repair_pops: u64,
}

impl RandR2Match {
    pub fn new(n: usize, _delta: usize, seed: u64) -> RandR2Match {
        RandR2Match {
            adj: LazyRankedAdjacency::new(n),
            pi: FastHashMap::default(),
            used_ranks: FastHashSet::default(),
            partner: vec![NO_PARTNER; n],
            vertex_rank: vec![Rank::INFINITY; n],
            edge_count: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            repair_pops: 0,
            queue_pushes: 0,
            max_repair_pops: 0,
        }
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

    /// Unmatches the partner of `x` (if any) and enqueues it at the rank of
    /// the matching edge it lost. `x`'s own fields are the caller's business.
    fn evict_partner_of(&mut self, x: VertexId, queue: &mut RepairQueue, floor: Option<Rank>) {
        let p = self.partner[x.index()];
        if p != NO_PARTNER {
            let p = VertexId(p);
            let lost = self.vertex_rank[p.index()];
            debug_assert!(
                floor.is_none_or(|f| lost > f),
                "eviction priority not above the pop priority"
            );
            queue.push(p, lost);
            self.partner[p.index()] = NO_PARTNER;
            self.vertex_rank[p.index()] = Rank::INFINITY;
        }
    }

    fn set_matched(&mut self, a: VertexId, b: VertexId, rank: Rank) {
        self.partner[a.index()] = b.0;
        self.partner[b.index()] = a.0;
        self.vertex_rank[a.index()] = rank;
        self.vertex_rank[b.index()] = rank;
    }

    /// Drains the repair queue: the find-new-partners loop described above.
    fn find_new_partners(&mut self, mut queue: RepairQueue) {
        let budget = self.edge_count + queue.len();
        let mut pops = 0u64;
        let mut last_priority: Option<Rank> = None;
        while let Some((v, r_v)) = queue.pop() {
            pops += 1;
            assert!(
                pops as usize <= budget,
                "repair loop exceeded its m + |S| iteration bound"
            );
            debug_assert!(
                last_priority.is_none_or(|p| p <= r_v),
                "repair queue popped out of priority order"
            );
            last_priority = Some(r_v);
            let k_v = self.vertex_rank[v.index()];
            let list = self.adj.compact(v);
            let start = list.partition_point(|&(r, _)| r <= r_v);
            let mut chosen = None;
            for &(r, w) in &list[start..] {
                if r >= k_v {
                    break;
                }
                if r < self.vertex_rank[w.index()] {
                    chosen = Some((r, w));
                    break;
                }
            }
            if let Some((r, w)) = chosen {
                self.evict_partner_of(w, &mut queue, Some(r_v));
                self.evict_partner_of(v, &mut queue, Some(r_v));
                self.set_matched(v, w, r);
            }
        }
        self.repair_pops += pops;
        self.max_repair_pops = self.max_repair_pops.max(pops);
        self.queue_pushes += queue.pushes;
    }

    fn insert_edge(&mut self, e: EdgeKey, rank: Rank) {
        self.pi.insert(e, rank);
        self.adj.insert(e, rank);
        self.edge_count += 1;
        let (u, v) = (e.u(), e.v());
        let mut queue = RepairQueue::new();
        if rank < self.vertex_rank[u.index()] && rank < self.vertex_rank[v.index()] {
            self.evict_partner_of(v, &mut queue, None);
            self.evict_partner_of(u, &mut queue, None);
            self.set_matched(u, v, rank);
        }
        self.find_new_partners(queue);
    }

    fn delete_edge(&mut self, e: EdgeKey) {
        let rank = self.pi.remove(&e).expect("delete of absent edge");
        self.adj.remove(e, rank);
        self.edge_count -= 1;
        let (u, v) = (e.u(), e.v());
        let mut queue = RepairQueue::new();
        if self.partner[v.index()] == u.0 {
            queue.push(u, rank);
            queue.push(v, rank);
            self.partner[u.index()] = NO_PARTNER;
            self.partner[v.index()] = NO_PARTNER;
            self.vertex_rank[u.index()] = Rank::INFINITY;
            self.vertex_rank[v.index()] = Rank::INFINITY;
        }
        self.find_new_partners(queue);
    }
}

impl DynamicMatching for RandR2Match {
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
            ("max_repair_pops", self.max_repair_pops),
        ]
    }
}

impl RankedMatching for RandR2Match {
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
