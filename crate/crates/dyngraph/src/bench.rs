//! Benchmark harness: timed replays of update sequences through the
//! algorithms, oracle-checked correctness sweeps, and CSV reporting.
//!
//! Timing reads the monotonic clock once per batch of 1024 operations and
//! divides down, so per-operation costs in the tens of nanoseconds are not
//! swamped by clock reads. Every run starts with one untimed warm-up replay
//! (which also hosts the oracle checkpoints, keeping them out of every timed
//! region), followed by `repetitions` timed replays with distinct derived
//! algorithm seeds. Per-instance results report the arithmetic mean across
//! repetitions; cross-instance aggregation uses the geometric mean.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::algo::AlgorithmId;
use crate::generators::{GenError, GeneratorConfig};
use crate::graph::{EdgeKey, FormatError, UpdateKind, UpdateOp, UpdateSequence};
use crate::coloring::DynamicColoring;
use crate::matching::{DynamicMatching, RankedMatching};
use crate::oracle;
use crate::{BuildError, UpdateError};

/// Operations per clock read in timed replays.
const TIMING_BATCH: usize = 1024;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("geometric mean needs a non-empty list of positive values")]
    BadGeometricMeanInput,
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("correctness violation at op {op_index}: {what}")]
    Correctness { op_index: usize, what: String },
    #[error("algorithm aborted: {0}")]
    Abort(#[from] UpdateError),
}

/// `exp(mean(ln vᵢ))` over positive values.
pub fn geometric_mean(values: &[f64]) -> Result<f64, BenchError> {
    if values.is_empty() || values.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
        return Err(BenchError::BadGeometricMeanInput);
    }
    let log_sum: f64 = values.iter().map(|&v| v.ln()).sum();
    Ok((log_sum / values.len() as f64).exp())
}

/// Where the update sequence comes from.
#[derive(Clone, Debug)]
pub enum InstanceSource {
    /// A sequence file, with an optional untimed preamble file that builds
    /// the starting graph.
    File { main: PathBuf, init: Option<PathBuf> },
    /// An inline generator spec; adaptive generators are re-run per
    /// repetition with the repetition's algorithm seed as the target seed.
    Spec(GeneratorConfig),
}

impl InstanceSource {
    /// Stable instance label used for grouping and CSV output.
    pub fn label(&self) -> String {
        match self {
            InstanceSource::File { main, .. } => main.display().to_string(),
            InstanceSource::Spec(config) => spec_label(config),
        }
    }
}

fn spec_label(config: &GeneratorConfig) -> String {
    match config {
        GeneratorConfig::Er { n, m, rho } => format!("er:n={n},m={m},rho={rho}"),
        GeneratorConfig::Rhg {
            n,
            avg_deg,
            gamma,
            rho,
        } => format!("rhg:n={n},avgdeg={avg_deg},gamma={gamma},rho={rho}"),
        GeneratorConfig::Clashing {
            algo,
            n,
            delta,
            count,
        } => format!("clash:algo={algo},n={n},delta={delta},count={count}"),
        GeneratorConfig::EqualDegree {
            n,
            delta,
            updates,
            ratio,
        } => format!("eqdeg:n={n},delta={delta},updates={updates},ratio={ratio}"),
        GeneratorConfig::SlidingWindow { n, m, phi, eta } => {
            format!("window:n={n},m={m},phi={phi},eta={eta}")
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algorithm: AlgorithmId,
    pub instance: InstanceSource,
    pub repetitions: usize,
    pub seed: u64,
    /// Oracle checkpoint period for the warm-up replay; `Some(0)` disables,
    /// `None` picks the default (every update for n ≤ 256, else every 1000).
    pub check_every: Option<usize>,
    /// Whether construction plus the init preamble count toward the timing;
    /// `None` picks the family default (excluded for coloring, included for
    /// matching).
    pub include_init: Option<bool>,
    /// Degree bound override for file instances.
    pub delta_override: Option<usize>,
    /// Recursion-depth cap override for the cascading recolorer.
    pub cascade_cap: Option<usize>,
}

impl RunConfig {
    pub fn new(algorithm: AlgorithmId, instance: InstanceSource, seed: u64) -> RunConfig {
        RunConfig {
            algorithm,
            instance,
            repetitions: 5,
            seed,
            check_every: Some(0),
            include_init: None,
            delta_override: None,
            cascade_cap: None,
        }
    }
}

/// Result of one (algorithm, instance) benchmark.
#[derive(Clone, Debug)]
pub struct BenchReport {
    pub algorithm: String,
    pub instance: String,
    /// Operations per timed repetition.
    pub ops: u64,
    /// Wall time summed over the timed repetitions.
    pub total: Duration,
    /// Arithmetic mean across repetitions of (repetition time / ops).
    pub avg_ns_per_op: Option<f64>,
    /// Filled in per instance group by [`compute_slowdowns`].
    pub slowdown: Option<f64>,
    /// Abort reason, when a repetition failed.
    pub failed: Option<String>,
    pub counters: Vec<(&'static str, u64)>,
}

/// Closed set of algorithm instances, dispatched by match so the tiny
/// per-operation bodies inline into the timed loop the same way statically
/// dispatched code would.
enum AlgoInstance {
    RecurseCol(crate::coloring::RecurseCol),
    CountCol(crate::coloring::CountCol),
    RandRCol(crate::coloring::RandRCol),
    HierCol(crate::coloring::HierCol),
    TrivialMatch(crate::matching::TrivialMatch),
    Hier1Match(crate::matching::Hier1Match),
    Hier2Match(crate::matching::Hier2Match),
    RandR1Match(crate::matching::RandR1Match),
    RandR2Match(crate::matching::RandR2Match),
}

macro_rules! each_algo {
    ($self:expr, $a:ident => $body:expr) => {
        match $self {
            AlgoInstance::RecurseCol($a) => $body,
            AlgoInstance::CountCol($a) => $body,
            AlgoInstance::RandRCol($a) => $body,
            AlgoInstance::HierCol($a) => $body,
            AlgoInstance::TrivialMatch($a) => $body,
            AlgoInstance::Hier1Match($a) => $body,
            AlgoInstance::Hier2Match($a) => $body,
            AlgoInstance::RandR1Match($a) => $body,
            AlgoInstance::RandR2Match($a) => $body,
        }
    };
}

impl AlgoInstance {
    fn build(
        id: AlgorithmId,
        n: usize,
        delta: usize,
        seed: u64,
        cascade_cap: Option<usize>,
    ) -> Result<AlgoInstance, BuildError> {
        use crate::algo::{ColoringAlgoId as C, MatchingAlgoId as M};
        Ok(match id {
            AlgorithmId::Coloring(C::RecurseCol) => AlgoInstance::RecurseCol(match cascade_cap {
                Some(cap) => crate::coloring::RecurseCol::with_cascade_cap(n, delta, seed, cap),
                None => crate::coloring::RecurseCol::new(n, delta, seed),
            }),
            AlgorithmId::Coloring(C::CountCol) => {
                AlgoInstance::CountCol(crate::coloring::CountCol::new(n, delta, seed)?)
            }
            AlgorithmId::Coloring(C::RandRCol) => {
                AlgoInstance::RandRCol(crate::coloring::RandRCol::new(n, delta, seed)?)
            }
            AlgorithmId::Coloring(C::HierCol) => {
                AlgoInstance::HierCol(crate::coloring::HierCol::new(n, delta, seed)?)
            }
            AlgorithmId::Matching(M::TrivialMatch) => {
                AlgoInstance::TrivialMatch(crate::matching::TrivialMatch::new(n, delta, seed))
            }
            AlgorithmId::Matching(M::Hier1Match) => {
                AlgoInstance::Hier1Match(crate::matching::Hier1Match::new(n, delta, seed))
            }
            AlgorithmId::Matching(M::Hier2Match) => {
                AlgoInstance::Hier2Match(crate::matching::Hier2Match::new(n, delta, seed))
            }
            AlgorithmId::Matching(M::RandR1Match) => {
                AlgoInstance::RandR1Match(crate::matching::RandR1Match::new(n, delta, seed))
            }
            AlgorithmId::Matching(M::RandR2Match) => {
                AlgoInstance::RandR2Match(crate::matching::RandR2Match::new(n, delta, seed))
            }
        })
    }

    #[inline]
    fn apply(&mut self, op: UpdateOp) -> Result<(), UpdateError> {
        each_algo!(self, a => a.apply(op))
    }

    fn counters(&self) -> Vec<(&'static str, u64)> {
        each_algo!(self, a => a.counters())
    }

    fn is_coloring(&self) -> bool {
        matches!(
            self,
            AlgoInstance::RecurseCol(_)
                | AlgoInstance::CountCol(_)
                | AlgoInstance::RandRCol(_)
                | AlgoInstance::HierCol(_)
        )
    }

    fn colors(&self) -> &[crate::coloring::Color] {
        match self {
            AlgoInstance::RecurseCol(a) => a.colors(),
            AlgoInstance::CountCol(a) => a.colors(),
            AlgoInstance::RandRCol(a) => a.colors(),
            AlgoInstance::HierCol(a) => a.colors(),
            _ => panic!("colors() on a matching instance"),
        }
    }

    fn matching(&self) -> Vec<EdgeKey> {
        match self {
            AlgoInstance::TrivialMatch(a) => a.matching(),
            AlgoInstance::Hier1Match(a) => a.matching(),
            AlgoInstance::Hier2Match(a) => a.matching(),
            AlgoInstance::RandR1Match(a) => a.matching(),
            AlgoInstance::RandR2Match(a) => a.matching(),
            _ => panic!("matching() on a coloring instance"),
        }
    }
}

/// Live edge set mirrored outside the timed regions, for oracle checks.
struct ShadowGraph {
    edges: Vec<EdgeKey>,
    slot: HashMap<EdgeKey, usize>,
}

impl ShadowGraph {
    fn new() -> ShadowGraph {
        ShadowGraph {
            edges: Vec::new(),
            slot: HashMap::new(),
        }
    }

    fn advance(&mut self, ops: &[UpdateOp]) {
        for op in ops {
            match op.kind {
                UpdateKind::Insert => {
                    self.slot.insert(op.edge, self.edges.len());
                    self.edges.push(op.edge);
                }
                UpdateKind::Delete => {
                    let i = self.slot.remove(&op.edge).expect("shadow delete of absent edge");
                    self.edges.swap_remove(i);
                    if let Some(&moved) = self.edges.get(i) {
                        self.slot.insert(moved, i);
                    }
                }
            }
        }
    }
}

/// Oracle checks for one checkpoint; `op_index` is only for error reports.
fn run_checkpoint(
    algo: &AlgoInstance,
    shadow: &ShadowGraph,
    n: usize,
    delta: usize,
    op_index: usize,
) -> Result<(), BenchError> {
    let fail = |what: String| BenchError::Correctness { op_index, what };
    if algo.is_coloring() {
        let proper = oracle::is_proper_coloring(&shadow.edges, algo.colors(), delta as u32)
            .map_err(|e| fail(e.to_string()))?;
        if !proper {
            return Err(fail("coloring not proper".into()));
        }
    } else {
        let matching = algo.matching();
        let maximal = oracle::is_maximal_matching(n, &shadow.edges, &matching)
            .map_err(|e| fail(e.to_string()))?;
        if !maximal {
            return Err(fail("matching not maximal".into()));
        }
    }
    Ok(())
}

/// LFMM checkpoint for the rank-based matchers, used by `verify`.
fn run_lfmm_checkpoint(
    algo: &dyn RankedMatching,
    n: usize,
    op_index: usize,
) -> Result<(), BenchError> {
    let fail = |what: String| BenchError::Correctness { op_index, what };
    let ranked = algo.edge_ranks();
    let expected = oracle::greedy_lfmm(n, &ranked).map_err(|e| fail(e.to_string()))?;
    if algo.matching() != expected {
        return Err(fail("matching diverged from the greedy construction".into()));
    }
    if !oracle::is_lfmm(n, &ranked, &algo.matching()).map_err(|e| fail(e.to_string()))? {
        return Err(fail("cover condition violated".into()));
    }
    Ok(())
}

fn default_check_every(n: usize) -> usize {
    if n <= 256 {
        1
    } else {
        1000
    }
}

/// Mixes a repetition index into the base seed.
pub fn derive_seed(seed: u64, rep: u64) -> u64 {
    // splitmix64 step over seed ⊕ rep.
    let mut z = seed ^ rep.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct ResolvedInstance {
    n: usize,
    delta: usize,
    init_ops: Vec<UpdateOp>,
    main_ops: Vec<UpdateOp>,
}

fn resolve_instance(
    config: &RunConfig,
    target_seed: u64,
) -> Result<ResolvedInstance, BenchError> {
    let (init, main) = match &config.instance {
        InstanceSource::File { main, init } => {
            let main = UpdateSequence::load(main)?;
            let init = init.as_ref().map(UpdateSequence::load).transpose()?;
            (init, main)
        }
        InstanceSource::Spec(gen) => {
            let out = gen.generate(config.seed, target_seed)?;
            (out.init, out.main)
        }
    };
    let n = main.n();
    let delta = config
        .delta_override
        .unwrap_or_else(|| main.delta_bound().max(init.as_ref().map_or(0, |s| s.delta_bound())));
    Ok(ResolvedInstance {
        n,
        delta,
        init_ops: init.map(|s| s.ops().to_vec()).unwrap_or_default(),
        main_ops: main.ops().to_vec(),
    })
}

fn replay_timed(algo: &mut AlgoInstance, ops: &[UpdateOp]) -> Result<Duration, UpdateError> {
    let mut total = Duration::ZERO;
    for batch in ops.chunks(TIMING_BATCH) {
        let start = Instant::now();
        for &op in batch {
            algo.apply(op)?;
        }
        total += start.elapsed();
    }
    Ok(total)
}

/// One untimed replay with oracle checkpoints every `check_every` ops.
fn replay_checked(
    algo: &mut AlgoInstance,
    ops: &[UpdateOp],
    shadow: &mut ShadowGraph,
    n: usize,
    delta: usize,
    check_every: usize,
) -> Result<(), BenchError> {
    let mut applied = 0usize;
    for &op in ops {
        algo.apply(op).map_err(BenchError::Abort)?;
        shadow.advance(std::slice::from_ref(&op));
        applied += 1;
        if check_every > 0 && applied.is_multiple_of(check_every) {
            run_checkpoint(algo, shadow, n, delta, applied)?;
        }
    }
    if check_every > 0 {
        run_checkpoint(algo, shadow, n, delta, applied)?;
    }
    Ok(())
}

/// Runs one (algorithm, instance) benchmark: warm-up with optional checks,
/// then timed repetitions.
pub fn run_benchmark(config: &RunConfig) -> Result<BenchReport, BenchError> {
    let algorithm = config.algorithm.to_string();
    let instance_label = config.instance.label();
    let include_init = config.include_init.unwrap_or(matches!(
        config.algorithm,
        AlgorithmId::Matching(_)
    ));
    let reps = config.repetitions.max(1);
    let adaptive = matches!(&config.instance, InstanceSource::Spec(g) if g.is_adaptive());

    // Warm-up replay, untimed, hosting the oracle checkpoints.
    let warm_seed = derive_seed(config.seed, 0);
    let warm = resolve_instance(config, warm_seed)?;
    let check_every = match config.check_every {
        Some(c) => c,
        None => default_check_every(warm.n),
    };
    {
        let mut algo =
            AlgoInstance::build(config.algorithm, warm.n, warm.delta, warm_seed, config.cascade_cap)?;
        let mut shadow = ShadowGraph::new();
        let warmed = replay_checked(&mut algo, &warm.init_ops, &mut shadow, warm.n, warm.delta, 0)
            .and_then(|()| {
                replay_checked(
                    &mut algo,
                    &warm.main_ops,
                    &mut shadow,
                    warm.n,
                    warm.delta,
                    check_every,
                )
            });
        match warmed {
            Ok(()) => {}
            Err(BenchError::Abort(abort)) => {
                return Ok(BenchReport {
                    algorithm,
                    instance: instance_label,
                    ops: 0,
                    total: Duration::ZERO,
                    avg_ns_per_op: None,
                    slowdown: None,
                    failed: Some(abort.to_string()),
                    counters: algo.counters(),
                });
            }
            Err(other) => return Err(other),
        }
    }
    // Non-adaptive instances are fixed across repetitions; adaptive ones are
    // re-coupled to each repetition's algorithm seed.
    let fixed_inst = if adaptive { None } else { Some(warm) };

    let mut total = Duration::ZERO;
    let mut per_rep_ns_per_op = Vec::with_capacity(reps);
    let mut ops_per_rep = 0u64;
    let mut counters = Vec::new();
    for rep in 0..reps {
        let rep_seed = derive_seed(config.seed, rep as u64 + 1);
        let regenerated;
        let inst = match &fixed_inst {
            Some(inst) => inst,
            None => {
                regenerated = resolve_instance(config, rep_seed)?;
                &regenerated
            }
        };
        let timed_ops = inst.main_ops.len() + if include_init { inst.init_ops.len() } else { 0 };
        ops_per_rep = timed_ops as u64;
        let mut rep_time = Duration::ZERO;
        let run = || -> Result<(Duration, AlgoInstance), UpdateError> {
            let mut elapsed = Duration::ZERO;
            let built = Instant::now();
            let mut algo =
                AlgoInstance::build(config.algorithm, inst.n, inst.delta, rep_seed, config.cascade_cap)
                    .expect("warm-up already validated construction");
            if include_init {
                elapsed += built.elapsed();
                elapsed += replay_timed(&mut algo, &inst.init_ops)?;
            } else {
                for &op in &inst.init_ops {
                    algo.apply(op)?;
                }
            }
            elapsed += replay_timed(&mut algo, &inst.main_ops)?;
            Ok((elapsed, algo))
        };
        match run() {
            Ok((elapsed, algo)) => {
                rep_time += elapsed;
                if rep == 0 {
                    counters = algo.counters();
                }
            }
            Err(abort) => {
                return Ok(BenchReport {
                    algorithm,
                    instance: instance_label,
                    ops: ops_per_rep,
                    total,
                    avg_ns_per_op: None,
                    slowdown: None,
                    failed: Some(abort.to_string()),
                    counters,
                });
            }
        }
        total += rep_time;
        if ops_per_rep > 0 {
            per_rep_ns_per_op.push(rep_time.as_nanos() as f64 / ops_per_rep as f64);
        }
    }
    let avg = if per_rep_ns_per_op.is_empty() {
        Some(0.0)
    } else {
        Some(per_rep_ns_per_op.iter().sum::<f64>() / per_rep_ns_per_op.len() as f64)
    };
    Ok(BenchReport {
        algorithm,
        instance: instance_label,
        ops: ops_per_rep,
        total,
        avg_ns_per_op: avg,
        slowdown: None,
        failed: None,
        counters,
    })
}

/// Outcome of a `verify` oracle sweep.
#[derive(Debug)]
pub struct VerifyOutcome {
    pub ops: usize,
    pub checkpoints: u64,
}

/// Replays the instance once with oracle checks every `check_every` updates
/// (default rule when `None`): proper coloring or maximality, plus exact
/// LFMM agreement for the rank-based matchers.
pub fn run_verify(config: &RunConfig) -> Result<VerifyOutcome, BenchError> {
    let seed = derive_seed(config.seed, 0);
    let inst = resolve_instance(config, seed)?;
    let check_every = match config.check_every {
        Some(0) | None => default_check_every(inst.n),
        Some(c) => c,
    };
    let mut shadow = ShadowGraph::new();
    let mut checkpoints = 0u64;

    // The ranked matchers get the full LFMM sweep; everything else goes
    // through the generic checkpoint.
    match config.algorithm {
        AlgorithmId::Matching(crate::algo::MatchingAlgoId::RandR1Match) => {
            let mut algo = crate::matching::RandR1Match::new(inst.n, inst.delta, seed);
            verify_ranked(&mut algo, &inst, check_every, &mut shadow, &mut checkpoints)?;
        }
        AlgorithmId::Matching(crate::algo::MatchingAlgoId::RandR2Match) => {
            let mut algo = crate::matching::RandR2Match::new(inst.n, inst.delta, seed);
            verify_ranked(&mut algo, &inst, check_every, &mut shadow, &mut checkpoints)?;
        }
        _ => {
            let mut algo =
                AlgoInstance::build(config.algorithm, inst.n, inst.delta, seed, config.cascade_cap)?;
            let mut applied = 0usize;
            for &op in inst.init_ops.iter().chain(inst.main_ops.iter()) {
                algo.apply(op).map_err(BenchError::Abort)?;
                shadow.advance(std::slice::from_ref(&op));
                applied += 1;
                if applied.is_multiple_of(check_every) {
                    run_checkpoint(&algo, &shadow, inst.n, inst.delta, applied)?;
                    checkpoints += 1;
                }
            }
            run_checkpoint(&algo, &shadow, inst.n, inst.delta, applied)?;
            checkpoints += 1;
        }
    }
    Ok(VerifyOutcome {
        ops: inst.init_ops.len() + inst.main_ops.len(),
        checkpoints,
    })
}

fn verify_ranked<A: RankedMatching>(
    algo: &mut A,
    inst: &ResolvedInstance,
    check_every: usize,
    shadow: &mut ShadowGraph,
    checkpoints: &mut u64,
) -> Result<(), BenchError> {
    let mut applied = 0usize;
    for &op in inst.init_ops.iter().chain(inst.main_ops.iter()) {
        algo.apply(op).map_err(BenchError::Abort)?;
        shadow.advance(std::slice::from_ref(&op));
        applied += 1;
        if applied.is_multiple_of(check_every) {
            let matching = algo.matching();
            let maximal = oracle::is_maximal_matching(inst.n, &shadow.edges, &matching)
                .map_err(|e| BenchError::Correctness {
                    op_index: applied,
                    what: e.to_string(),
                })?;
            if !maximal {
                return Err(BenchError::Correctness {
                    op_index: applied,
                    what: "matching not maximal".into(),
                });
            }
            run_lfmm_checkpoint(algo, inst.n, applied)?;
            *checkpoints += 1;
        }
    }
    run_lfmm_checkpoint(algo, inst.n, applied)?;
    *checkpoints += 1;
    Ok(())
}

/// Fills in the slowdown column: within each instance group the fastest
/// non-failed run (ties to the lexicographically first algorithm id) gets
/// 1.00 and the rest are expressed relative to it.
pub fn compute_slowdowns(reports: &mut [BenchReport]) {
    let mut fastest: HashMap<String, f64> = HashMap::new();
    let mut sorted: Vec<usize> = (0..reports.len()).collect();
    sorted.sort_by(|&a, &b| {
        reports[a]
            .algorithm
            .cmp(&reports[b].algorithm)
            .then(reports[a].instance.cmp(&reports[b].instance))
    });
    for &i in &sorted {
        if let Some(avg) = reports[i].avg_ns_per_op {
            let entry = fastest
                .entry(reports[i].instance.clone())
                .or_insert(f64::INFINITY);
            if avg < *entry {
                *entry = avg;
            }
        }
    }
    for report in reports.iter_mut() {
        report.slowdown = match (report.avg_ns_per_op, fastest.get(&report.instance)) {
            (Some(avg), Some(&best)) if best.is_finite() && best > 0.0 => Some(avg / best),
            _ => None,
        };
    }
}

/// Renders reports as CSV: deterministic row order (algorithm, then
/// instance), decimal points, no thousands separators. Failed runs leave the
/// timing columns empty and set `failed` to 1.
pub fn emit_csv(reports: &[BenchReport]) -> String {
    let mut rows: Vec<&BenchReport> = reports.iter().collect();
    rows.sort_by(|a, b| {
        a.algorithm
            .cmp(&b.algorithm)
            .then_with(|| a.instance.cmp(&b.instance))
    });
    let mut out = String::from("algorithm,instance,ops,avg_ns_per_op,slowdown,failed\n");
    for r in rows {
        let avg = r
            .avg_ns_per_op
            .map(|v| format!("{v:.2}"))
            .unwrap_or_default();
        let slowdown = r
            .slowdown
            .map(|v| format!("{v:.2}"))
            .unwrap_or_default();
        let failed = if r.failed.is_some() { 1 } else { 0 };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.algorithm, r.instance, r.ops, avg, slowdown, failed
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_mean_basics() {
        assert!((geometric_mean(&[1.0, 100.0]).unwrap() - 10.0).abs() < 1e-12);
        assert!((geometric_mean(&[7.5]).unwrap() - 7.5).abs() < 1e-12);
        assert!((geometric_mean(&[2.0, 8.0]).unwrap() - 4.0).abs() < 1e-12);
        assert!(geometric_mean(&[]).is_err());
        assert!(geometric_mean(&[1.0, 0.0]).is_err());
        assert!(geometric_mean(&[1.0, -3.0]).is_err());
    }

    #[test]
    fn geometric_mean_scale_equivariance() {
        let values = [3.0, 17.5, 0.25, 9.0];
        let scaled: Vec<f64> = values.iter().map(|v| v * 12.5).collect();
        let a = geometric_mean(&values).unwrap();
        let b = geometric_mean(&scaled).unwrap();
        assert!((b - 12.5 * a).abs() < 1e-9);
    }

    fn report(algo: &str, inst: &str, avg: Option<f64>) -> BenchReport {
        BenchReport {
            algorithm: algo.into(),
            instance: inst.into(),
            ops: 100,
            total: Duration::from_nanos(1),
            avg_ns_per_op: avg,
            slowdown: None,
            failed: if avg.is_none() { Some("boom".into()) } else { None },
            counters: vec![],
        }
    }

    #[test]
    fn empty_instance_yields_a_zeroed_report() {
        use crate::algo::MatchingAlgoId;
        use crate::generators::GeneratorConfig;
        let config = RunConfig {
            repetitions: 2,
            ..RunConfig::new(
                AlgorithmId::Matching(MatchingAlgoId::TrivialMatch),
                InstanceSource::Spec(GeneratorConfig::parse("er:n=8,m=0").unwrap()),
                1,
            )
        };
        let report = run_benchmark(&config).unwrap();
        assert_eq!(report.ops, 0);
        assert!(report.failed.is_none());
        assert_eq!(report.avg_ns_per_op, Some(0.0));
    }

    #[test]
    fn identical_configs_reproduce_counters() {
        use crate::algo::ColoringAlgoId;
        use crate::generators::GeneratorConfig;
        let config = RunConfig {
            repetitions: 2,
            ..RunConfig::new(
                AlgorithmId::Coloring(ColoringAlgoId::CountCol),
                InstanceSource::Spec(GeneratorConfig::parse("er:n=64,m=512,rho=0.5").unwrap()),
                33,
            )
        };
        let a = run_benchmark(&config).unwrap();
        let b = run_benchmark(&config).unwrap();
        assert_eq!(a.counters, b.counters);
        assert_eq!(a.ops, b.ops);
    }

    #[test]
    fn slowdown_normalizes_per_instance_group() {
        let mut reports = vec![
            report("b", "i1", Some(200.0)),
            report("a", "i1", Some(100.0)),
            report("a", "i2", Some(50.0)),
        ];
        compute_slowdowns(&mut reports);
        let ones = reports
            .iter()
            .filter(|r| r.instance == "i1" && r.slowdown == Some(1.0))
            .count();
        assert_eq!(ones, 1, "exactly one 1.00 in the group");
        assert_eq!(reports[0].slowdown, Some(2.0));
        assert_eq!(reports[2].slowdown, Some(1.0));
    }

    #[test]
    fn csv_shape_and_failed_rows() {
        let mut reports = vec![
            report("countcol", "er:n=8,m=4,rho=0", Some(123.456)),
            report("recursecol", "er:n=8,m=4,rho=0", None),
        ];
        compute_slowdowns(&mut reports);
        let csv = emit_csv(&reports);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "algorithm,instance,ops,avg_ns_per_op,slowdown,failed");
        assert_eq!(lines[1], "countcol,er:n=8,m=4,rho=0,100,123.46,1.00,0");
        assert_eq!(lines[2], "recursecol,er:n=8,m=4,rho=0,100,,,1");
    }
}
