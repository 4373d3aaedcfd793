//! Greedy baseline.
//!
//! An insertion matches its endpoints when both are free. Deleting a
//! matching edge frees both endpoints, and each of them rescans its neighbor
//! array in order for the first free partner. Everything sits in swap-delete
//! arrays, so the scans are sequential and cache-friendly.

use crate::graph::{EdgeKey, SwapDeleteAdjacency, UpdateKind, UpdateOp, VertexId};
use crate::UpdateError;

use super::{collect_matching, matched_pairs, DynamicMatching, NO_PARTNER};

pub struct TrivialMatch {
    adj: SwapDeleteAdjacency,
    partner: Vec<u32>,
    partner_scans: u64,
    matches_formed: u64,
}

impl TrivialMatch {
    pub fn new(n: usize, _delta: usize, _seed: u64) -> TrivialMatch {
        TrivialMatch {
            adj: SwapDeleteAdjacency::new(n),
            partner: vec![NO_PARTNER; n],
            partner_scans: 0,
            matches_formed: 0,
        }
    }

    fn rescan(&mut self, v: VertexId) {
        for i in 0..self.adj.degree(v) {
            let w = self.adj.neighbors(v)[i];
            self.partner_scans += 1;
            if self.partner[w.index()] == NO_PARTNER {
                self.partner[v.index()] = w.0;
                self.partner[w.index()] = v.0;
                self.matches_formed += 1;
                return;
            }
        }
    }

    /// True iff the coupled sliding-window generator should treat `e` as a
    /// matching edge of this instance.
    pub fn is_matching_edge(&self, e: EdgeKey) -> bool {
        self.partner[e.u().index()] == e.v().0
    }
}

impl DynamicMatching for TrivialMatch {
    fn apply(&mut self, op: UpdateOp) -> Result<(), UpdateError> {
        let e = op.edge;
        let (u, v) = (e.u(), e.v());
        match op.kind {
            UpdateKind::Insert => {
                self.adj.insert(e);
                if self.partner[u.index()] == NO_PARTNER && self.partner[v.index()] == NO_PARTNER {
                    self.partner[u.index()] = v.0;
                    self.partner[v.index()] = u.0;
                    self.matches_formed += 1;
                }
            }
            UpdateKind::Delete => {
                self.adj.remove(e).expect("delete of absent edge");
                if self.partner[u.index()] == v.0 {
                    self.partner[u.index()] = NO_PARTNER;
                    self.partner[v.index()] = NO_PARTNER;
                    self.rescan(u);
                    self.rescan(v);
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
            ("partner_scans", self.partner_scans),
            ("matches_formed", self.matches_formed),
        ]
    }
}
