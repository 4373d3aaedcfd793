//! Static random graphs used as edge pools by the dynamization procedures.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::graph::{EdgeKey, VertexId};

use super::GenError;

/// Number of possible edges on `n` vertices.
pub fn max_edges(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Start of row `u` in the colexicographic edge numbering: edges `(u, v)`
/// with `v > u` occupy indices `[row_start(u, n), row_start(u+1, n))`.
fn row_start(u: u64, n: u64) -> u64 {
    u * n - u * (u + 1) / 2
}

/// Edge with index `k` in the numbering above.
fn unrank_edge(k: u64, n: usize) -> EdgeKey {
    let nf = n as u64;
    // Float guess for the row, then fix up exactly.
    let x = n as f64 - 0.5;
    let mut u = (x - (x * x - 2.0 * k as f64).max(0.0).sqrt()).floor() as u64;
    u = u.min(nf - 2);
    while row_start(u + 1, nf) <= k {
        u += 1;
    }
    while row_start(u, nf) > k {
        u -= 1;
    }
    let v = u + 1 + (k - row_start(u, nf));
    EdgeKey::new(VertexId(u as u32), VertexId(v as u32)).expect("unrank produced a loop")
}

/// `m` distinct uniform random edges on `n` vertices: a G(n,m) realization
/// of the G(n,p) family with p = m / C(n,2). Uses Floyd's sampling, so any
/// `m` up to the complete graph works. Deterministic per seed.
pub fn gen_er(n: usize, m: u64, seed: u64) -> Result<Vec<EdgeKey>, GenError> {
    let total = max_edges(n);
    if m > total {
        return Err(GenError::TooManyEdges {
            requested: m,
            available: total,
            n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = std::collections::HashSet::with_capacity(m as usize);
    let mut edges = Vec::with_capacity(m as usize);
    for j in (total - m)..total {
        let t = rng.random_range(0..=j);
        let k = if picked.insert(t) { t } else { j };
        if k != t {
            picked.insert(k);
        }
        edges.push(unrank_edge(k, n));
    }
    Ok(edges)
}

/// Threshold random hyperbolic graph: `n` points on a hyperbolic disk with
/// radial density controlled by `gamma` (power-law exponent `γ > 2`), two
/// points connected iff their hyperbolic distance is below the disk radius.
/// The radius is calibrated by bisection until the empirical average degree
/// lands within 25% of `avg_deg`; failure to do so is an error. Pairwise
/// distances make this Θ(n²) per calibration step.
pub fn gen_rhg(n: usize, avg_deg: f64, gamma: f64, seed: u64) -> Result<Vec<EdgeKey>, GenError> {
    if gamma <= 2.0 {
        return Err(GenError::InvalidParameter(format!(
            "gamma {gamma} must exceed 2"
        )));
    }
    if avg_deg < 1.0 || n < 2 {
        return Err(GenError::InvalidParameter(
            "need avg_deg ≥ 1 and n ≥ 2".into(),
        ));
    }
    let alpha = (gamma - 1.0) / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // One set of uniforms reused for every candidate radius, so the search
    // is monotone and deterministic.
    let quantiles: Vec<f64> = (0..n).map(|_| rng.random()).collect();
    let angles: Vec<f64> = (0..n)
        .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
        .collect();

    let count_edges = |radius: f64| -> u64 {
        let points = place_points(&quantiles, alpha, radius);
        let cosh_r = radius.cosh();
        let mut m = 0u64;
        for i in 0..n {
            for j in (i + 1)..n {
                if cosh_dist(&points[i], &points[j], &angles, i, j) < cosh_r {
                    m += 1;
                }
            }
        }
        m
    };

    let target_m = avg_deg * n as f64 / 2.0;
    // Degree falls as the radius grows; bracket the target then bisect.
    let mut lo = 0.05f64;
    let mut hi = 2.0 * (n as f64).ln().max(1.0);
    while (count_edges(hi) as f64) > target_m && hi < 200.0 {
        hi *= 1.5;
    }
    let mut best = (f64::INFINITY, hi);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        let m = count_edges(mid) as f64;
        let miss = (m - target_m).abs();
        if miss < best.0 {
            best = (miss, mid);
        }
        if m > target_m {
            lo = mid;
        } else {
            hi = mid;
        }
        if miss / target_m < 0.02 {
            break;
        }
    }
    let radius = best.1;
    let points = place_points(&quantiles, alpha, radius);
    let cosh_r = radius.cosh();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if cosh_dist(&points[i], &points[j], &angles, i, j) < cosh_r {
                edges.push(EdgeKey::new(VertexId(i as u32), VertexId(j as u32)).unwrap());
            }
        }
    }
    let reached = 2.0 * edges.len() as f64 / n as f64;
    if (reached - avg_deg).abs() > 0.25 * avg_deg {
        return Err(GenError::Calibration {
            target: avg_deg,
            reached,
        });
    }
    Ok(edges)
}

struct HyperPoint {
    cosh_r: f64,
    sinh_r: f64,
}

/// Radii from the quasi-uniform quantiles via the inverse CDF
/// F(r) = (cosh(αr) − 1) / (cosh(αR) − 1).
fn place_points(quantiles: &[f64], alpha: f64, radius: f64) -> Vec<HyperPoint> {
    quantiles
        .iter()
        .map(|&q| {
            let r = ((q * ((alpha * radius).cosh() - 1.0) + 1.0).acosh()) / alpha;
            HyperPoint {
                cosh_r: r.cosh(),
                sinh_r: r.sinh(),
            }
        })
        .collect()
}

#[inline]
fn cosh_dist(a: &HyperPoint, b: &HyperPoint, angles: &[f64], i: usize, j: usize) -> f64 {
    let dphi = (angles[i] - angles[j]).cos();
    a.cosh_r * b.cosh_r - a.sinh_r * b.sinh_r * dphi
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn er_with_every_edge_is_complete() {
        let edges = gen_er(4, 6, 99).unwrap();
        let set: HashSet<EdgeKey> = edges.iter().copied().collect();
        assert_eq!(set.len(), 6);
        for u in 0..4u32 {
            for v in (u + 1)..4 {
                assert!(set.contains(&crate::graph::edge(u, v)));
            }
        }
    }

    #[test]
    fn er_zero_edges_is_empty() {
        assert!(gen_er(128, 0, 1).unwrap().is_empty());
    }

    #[test]
    fn er_rejects_impossible_m() {
        assert!(matches!(
            gen_er(4, 7, 1),
            Err(GenError::TooManyEdges { .. })
        ));
    }

    #[test]
    fn er_edges_are_distinct_and_in_range() {
        let n = 200;
        let m = 5000;
        let edges = gen_er(n, m, 7).unwrap();
        assert_eq!(edges.len(), m as usize);
        let set: HashSet<EdgeKey> = edges.iter().copied().collect();
        assert_eq!(set.len(), m as usize, "duplicate edge emitted");
        for e in &edges {
            assert!(e.v().index() < n);
        }
    }

    #[test]
    fn er_mean_degree_tracks_m() {
        // Degree histogram mean recomputed from the emitted edges.
        let n = 1 << 10;
        let m = (n as u64) * 64;
        let edges = gen_er(n, m, 1).unwrap();
        let mut deg = vec![0u32; n];
        for e in &edges {
            deg[e.u().index()] += 1;
            deg[e.v().index()] += 1;
        }
        let mean = deg.iter().map(|&d| d as f64).sum::<f64>() / n as f64;
        let target = 128.0;
        assert!(
            (mean - target).abs() <= 0.05 * target,
            "mean degree {mean} not within 5% of {target}"
        );
    }

    #[test]
    fn er_is_deterministic_per_seed() {
        assert_eq!(gen_er(64, 512, 5).unwrap(), gen_er(64, 512, 5).unwrap());
        assert_ne!(gen_er(64, 512, 5).unwrap(), gen_er(64, 512, 6).unwrap());
    }

    #[test]
    fn unrank_is_a_bijection_on_small_n() {
        for n in 2..=12 {
            let mut seen = HashSet::new();
            for k in 0..max_edges(n) {
                assert!(seen.insert(unrank_edge(k, n)));
            }
            assert_eq!(seen.len() as u64, max_edges(n));
        }
    }

    #[test]
    fn rhg_two_vertices_connect_at_max_density() {
        let edges = gen_rhg(2, 1.0, 2.8, 3).unwrap();
        assert_eq!(edges.len(), 1);
    }

    #[test]
    fn rhg_hits_degree_window_with_heavy_tail() {
        let n = 1 << 12;
        let edges = gen_rhg(n, 128.0, 2.8, 42).unwrap();
        let mut deg = vec![0u32; n];
        for e in &edges {
            deg[e.u().index()] += 1;
            deg[e.v().index()] += 1;
        }
        let mean = deg.iter().map(|&d| d as f64).sum::<f64>() / n as f64;
        assert!(
            (96.0..=160.0).contains(&mean),
            "average degree {mean} outside [96, 160]"
        );
        let max = *deg.iter().max().unwrap() as f64;
        assert!(
            max > 8.0 * mean,
            "max degree {max} not heavy-tailed against mean {mean}"
        );
    }
}
