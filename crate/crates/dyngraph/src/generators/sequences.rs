//! Dynamization procedures: random insert/delete orders, adversarial
//! clashing insertions, near-Δ-regular churn, and sliding windows.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::coloring::DynamicColoring;
use crate::graph::{EdgeKey, HashedAdjacency, UpdateOp, UpdateSequence, VertexId};
use crate::matching::{DynamicMatching, TrivialMatch};

use super::GenError;

/// Shuffles `edges` and emits each one exactly once as an insertion; before
/// every insertion, with probability ρ/(1+ρ), a uniformly random currently
/// present edge is deleted instead (when one exists). The stream ends once
/// every edge has been inserted, so insertions number exactly `|edges|` and
/// deletions about `ρ·|edges|`.
pub fn random_update_sequence(
    n: usize,
    edges: &[EdgeKey],
    rho: f64,
    seed: u64,
) -> Result<UpdateSequence, GenError> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(GenError::InvalidParameter(format!("rho {rho} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = edges.to_vec();
    order.shuffle(&mut rng);
    let insert_prob = 1.0 / (1.0 + rho);
    let mut ops = Vec::with_capacity(order.len());
    let mut present: Vec<EdgeKey> = Vec::new();
    let mut slot: HashMap<EdgeKey, usize> = HashMap::new();
    let mut next = 0usize;
    while next < order.len() {
        if rho == 0.0 || rng.random::<f64>() < insert_prob {
            let e = order[next];
            next += 1;
            slot.insert(e, present.len());
            present.push(e);
            ops.push(UpdateOp::insert(e));
        } else if !present.is_empty() {
            let i = rng.random_range(0..present.len());
            let e = present.swap_remove(i);
            slot.remove(&e);
            if let Some(&moved) = present.get(i) {
                slot.insert(moved, i);
            }
            ops.push(UpdateOp::delete(e));
        }
    }
    Ok(UpdateSequence::from_ops(n, ops)?)
}

/// A clashing sequence together with the flag saying whether the generator
/// saturated before reaching the requested length.
#[derive(Clone, Debug)]
pub struct ClashingSequence {
    pub sequence: UpdateSequence,
    pub truncated: bool,
}

/// Attempts per emitted clash before the generator declares saturation.
const CLASH_ATTEMPTS: usize = 500_000;

/// Insertion-only adversary against a live coloring instance: every emitted
/// edge joins two vertices the target currently colors alike (with both
/// degrees below Δ), and is applied to the target immediately so the next
/// pick reacts to the recolor it caused. Replaying the sequence against the
/// same algorithm with the same seed reproduces every clash.
pub fn clashing_sequence(
    target: &mut dyn DynamicColoring,
    n: usize,
    delta: usize,
    count: usize,
    seed: u64,
) -> Result<ClashingSequence, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shadow = HashedAdjacency::new(n);
    let mut ops = Vec::with_capacity(count);
    let mut truncated = false;
    'emit: for _ in 0..count {
        for _ in 0..CLASH_ATTEMPTS {
            let a = VertexId(rng.random_range(0..n as u32));
            let b = VertexId(rng.random_range(0..n as u32));
            if a == b || target.color_of(a) != target.color_of(b) {
                continue;
            }
            if shadow.degree(a) >= delta || shadow.degree(b) >= delta {
                continue;
            }
            let e = EdgeKey::new(a, b).unwrap();
            if shadow.contains(e) {
                continue;
            }
            shadow.insert(e);
            let op = UpdateOp::insert(e);
            target.apply(op)?;
            ops.push(op);
            continue 'emit;
        }
        truncated = true;
        break;
    }
    let sequence = UpdateSequence::with_delta_bound(n, delta, ops)?;
    Ok(ClashingSequence {
        sequence,
        truncated,
    })
}

/// The two halves of an equal-degree instance: the phase-1 build of the
/// near-(Δ−1)-regular base graph, and the phase-2 churn of the degree-1
/// overlay. Replay `initial` first, untimed; measure `dynamic`.
#[derive(Clone, Debug)]
pub struct EqualDegreeInstance {
    pub initial: UpdateSequence,
    pub dynamic: UpdateSequence,
}

/// Phase 1 packs random edges between vertices of degree < Δ−1 until the
/// average degree reaches `ratio·(Δ−1)` (or no addable pair remains). Phase
/// 2 performs `updates` operations against a maximum-degree-1 overlay: a
/// random vertex either loses its overlay edge or gains one to a random
/// partner that has none and is not a base-graph neighbor. The maximum
/// degree never exceeds Δ.
pub fn equal_degree_sequence(
    n: usize,
    delta: usize,
    updates: usize,
    seed: u64,
    ratio: f64,
) -> Result<EqualDegreeInstance, GenError> {
    if delta < 2 || n < 4 {
        return Err(GenError::InvalidParameter(
            "equal-degree needs delta ≥ 2 and n ≥ 4".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = delta - 1;
    let target_edges = (ratio * cap as f64 * n as f64 / 2.0).ceil() as u64;

    let mut present: HashSet<EdgeKey> = HashSet::new();
    let mut degree = vec![0usize; n];
    let mut initial_ops = Vec::new();
    // Pool of vertices still below the degree cap, swap-removable.
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let mut pool_pos: Vec<usize> = (0..n).collect();
    let add_edge = |e: EdgeKey,
                        present: &mut HashSet<EdgeKey>,
                        degree: &mut Vec<usize>,
                        pool: &mut Vec<u32>,
                        pool_pos: &mut Vec<usize>,
                        ops: &mut Vec<UpdateOp>| {
        present.insert(e);
        ops.push(UpdateOp::insert(e));
        for x in [e.u(), e.v()] {
            degree[x.index()] += 1;
            if degree[x.index()] >= cap {
                let pos = pool_pos[x.index()];
                let last = *pool.last().unwrap();
                pool.swap_remove(pos);
                pool_pos[last as usize] = pos;
            }
        }
    };

    let mut failures = 0usize;
    while (initial_ops.len() as u64) < target_edges && pool.len() >= 2 {
        let a = pool[rng.random_range(0..pool.len())];
        let b = pool[rng.random_range(0..pool.len())];
        if a == b {
            continue;
        }
        let e = EdgeKey::new(VertexId(a), VertexId(b)).unwrap();
        if present.contains(&e) {
            failures += 1;
            if failures > 5_000 {
                // Rejection sampling has stalled; sweep the remaining pool
                // exactly and stop when nothing is addable.
                let added = exact_pack(
                    &mut rng,
                    cap,
                    target_edges,
                    &mut present,
                    &mut degree,
                    &mut pool,
                    &mut pool_pos,
                    &mut initial_ops,
                );
                if !added {
                    break;
                }
                failures = 0;
            }
            continue;
        }
        failures = 0;
        add_edge(
            e,
            &mut present,
            &mut degree,
            &mut pool,
            &mut pool_pos,
            &mut initial_ops,
        );
    }

    // Phase 2: churn the degree-1 overlay.
    let mut overlay: Vec<Option<VertexId>> = vec![None; n];
    let mut dynamic_ops = Vec::with_capacity(updates);
    'outer: for _ in 0..updates {
        let v = VertexId(rng.random_range(0..n as u32));
        if let Some(u) = overlay[v.index()] {
            dynamic_ops.push(UpdateOp::delete(EdgeKey::new(v, u).unwrap()));
            overlay[v.index()] = None;
            overlay[u.index()] = None;
        } else {
            for _ in 0..100_000 {
                let u = VertexId(rng.random_range(0..n as u32));
                if u == v || overlay[u.index()].is_some() {
                    continue;
                }
                let e = EdgeKey::new(v, u).unwrap();
                if present.contains(&e) {
                    continue;
                }
                dynamic_ops.push(UpdateOp::insert(e));
                overlay[v.index()] = Some(u);
                overlay[u.index()] = Some(v);
                continue 'outer;
            }
            break; // no overlay partner available for v
        }
    }

    // End-to-end validation of the combined replay against Δ.
    let mut combined = initial_ops.clone();
    combined.extend_from_slice(&dynamic_ops);
    UpdateSequence::with_delta_bound(n, delta, combined)?;

    Ok(EqualDegreeInstance {
        initial: UpdateSequence::with_delta_bound(n, delta, initial_ops)?,
        dynamic: UpdateSequence::with_delta_bound(n, delta, dynamic_ops)?,
    })
}

/// Exhaustive packing pass over the remaining low-degree pool. Returns true
/// if at least one edge was added.
#[allow(clippy::too_many_arguments)]
fn exact_pack(
    rng: &mut ChaCha8Rng,
    cap: usize,
    target_edges: u64,
    present: &mut HashSet<EdgeKey>,
    degree: &mut [usize],
    pool: &mut Vec<u32>,
    pool_pos: &mut [usize],
    ops: &mut Vec<UpdateOp>,
) -> bool {
    let snapshot = pool.clone();
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for (i, &a) in snapshot.iter().enumerate() {
        for &b in &snapshot[i + 1..] {
            let e = EdgeKey::new(VertexId(a), VertexId(b)).unwrap();
            if !present.contains(&e) {
                pairs.push((a, b));
            }
        }
    }
    pairs.shuffle(rng);
    let mut added = false;
    for (a, b) in pairs {
        if (ops.len() as u64) >= target_edges {
            break;
        }
        if degree[a as usize] >= cap || degree[b as usize] >= cap {
            continue;
        }
        let e = EdgeKey::new(VertexId(a), VertexId(b)).unwrap();
        present.insert(e);
        ops.push(UpdateOp::insert(e));
        added = true;
        for x in [a, b] {
            degree[x as usize] += 1;
            if degree[x as usize] >= cap {
                let pos = pool_pos[x as usize];
                let last = *pool.last().unwrap();
                pool.swap_remove(pos);
                pool_pos[last as usize] = pos;
            }
        }
    }
    added
}

/// Inserts `edges` in random order, and whenever the live-edge count stands
/// at `phi`, first deletes one edge: with probability `eta` the oldest live
/// edge currently matched by a coupled [`TrivialMatch`] instance (falling
/// back to the oldest live edge when none is matched), otherwise the oldest
/// live edge. Every emitted operation is applied to the coupled instance,
/// so the η-branch adapts to the matcher it is attacking.
pub fn sliding_window_sequence(
    n: usize,
    edges: &[EdgeKey],
    phi: usize,
    eta: f64,
    seed: u64,
) -> Result<UpdateSequence, GenError> {
    if phi == 0 {
        return Err(GenError::InvalidParameter("phi must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(GenError::InvalidParameter(format!("eta {eta} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = edges.to_vec();
    order.shuffle(&mut rng);
    let mut trivial = TrivialMatch::new(n, 0, 0);
    let mut live: BTreeMap<u64, EdgeKey> = BTreeMap::new();
    let mut ops = Vec::with_capacity(order.len());
    for (age, e) in order.into_iter().enumerate() {
        if live.len() == phi {
            let matched_branch = eta > 0.0 && rng.random::<f64>() < eta;
            let key = if matched_branch {
                live.iter()
                    .find(|(_, &f)| trivial.is_matching_edge(f))
                    .map(|(&k, _)| k)
                    .unwrap_or_else(|| *live.keys().next().unwrap())
            } else {
                *live.keys().next().unwrap()
            };
            let victim = live.remove(&key).unwrap();
            let op = UpdateOp::delete(victim);
            trivial.apply(op).expect("trivial matcher never errors");
            ops.push(op);
        }
        live.insert(age as u64, e);
        let op = UpdateOp::insert(e);
        trivial.apply(op).expect("trivial matcher never errors");
        ops.push(op);
    }
    Ok(UpdateSequence::from_ops(n, ops)?)
}
