//! Command-line harness: generate instances, run timed benchmarks, and run
//! oracle-checked correctness sweeps.
//!
//! Exit codes: 0 ok, 1 correctness failure, 2 usage error, 3 algorithm abort.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use dyngraph::algo::AlgorithmId;
use dyngraph::bench::{
    compute_slowdowns, emit_csv, geometric_mean, run_benchmark, run_verify, BenchError,
    BenchReport, InstanceSource, RunConfig,
};
use dyngraph::generators::GeneratorConfig;

const EXIT_CORRECTNESS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ABORT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "bench",
    about = "Benchmark and verify fully dynamic coloring and matching algorithms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time one or more algorithms over one or more instances.
    Run(RunArgs),
    /// Generate an update-sequence file from a generator spec.
    Gen(GenArgs),
    /// Replay an instance with oracle checks at every checkpoint.
    Verify(VerifyArgs),
    /// Convert a temporal edge list (src dst weight timestamp) into an
    /// update-sequence file, dropping records that violate the replay state.
    Ingest(IngestArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm ids, comma separated (e.g. countcol,recursecol).
    #[arg(long, value_delimiter = ',', required = true)]
    algo: Vec<String>,
    /// Instance: a sequence file path or an inline generator spec
    /// (kind:key=value,...). May be given multiple times.
    #[arg(long, required = true)]
    instance: Vec<String>,
    /// Untimed preamble file replayed before each timed instance (file
    /// instances only).
    #[arg(long)]
    init: Option<PathBuf>,
    /// Timed repetitions per (algorithm, instance) pair.
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Oracle checkpoint period during the warm-up replay (0 = off).
    #[arg(long, default_value_t = 0)]
    check_every: usize,
    /// Count construction and preamble replay as timed work.
    #[arg(long, conflicts_with = "exclude_init")]
    include_init: bool,
    /// Never count construction and preamble replay (default for coloring).
    #[arg(long)]
    exclude_init: bool,
    /// Degree-bound override for file instances.
    #[arg(long)]
    delta: Option<usize>,
    /// Recursion-depth cap for recursecol cascades.
    #[arg(long)]
    cascade_cap: Option<usize>,
    /// Write the report as CSV to this path.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Print each run's per-phase counters under its row.
    #[arg(long)]
    counters: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Generator spec, e.g. er:n=1024,m=65536,rho=0.25 or
    /// clash:algo=countcol,n=4096,delta=512,count=100000.
    #[arg(long)]
    spec: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seed of the coupled target instance for adaptive generators.
    #[arg(long)]
    target_seed: Option<u64>,
    /// Output path; equal-degree instances also write `<out>.init`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    algo: String,
    /// Instance: a sequence file path or an inline generator spec.
    #[arg(long)]
    instance: String,
    /// Untimed preamble file replayed before the checked instance.
    #[arg(long)]
    init: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Checkpoint period; 0 picks the default (1 for n ≤ 256, else 1000).
    #[arg(long, default_value_t = 0)]
    check_every: usize,
    /// Degree-bound override for file instances.
    #[arg(long)]
    delta: Option<usize>,
}

#[derive(Args)]
struct IngestArgs {
    /// Temporal edge-list file; `%` and `#` lines are comments.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn parse_instance(raw: &str, init: Option<PathBuf>) -> Result<InstanceSource, String> {
    if raw.contains(':') && !PathBuf::from(raw).exists() {
        let config = GeneratorConfig::parse(raw).map_err(|e| e.to_string())?;
        if init.is_some() {
            return Err("--init only applies to file instances".into());
        }
        Ok(InstanceSource::Spec(config))
    } else {
        Ok(InstanceSource::File {
            main: PathBuf::from(raw),
            init,
        })
    }
}

fn parse_algo(raw: &str) -> Result<AlgorithmId, String> {
    AlgorithmId::from_str(raw).map_err(|e| e.to_string())
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Ingest(args) => cmd_ingest(args),
    }
}

fn cmd_ingest(args: IngestArgs) -> ExitCode {
    let file = match std::fs::File::open(&args.input) {
        Ok(f) => f,
        Err(e) => return usage_error(&format!("opening {}: {e}", args.input.display())),
    };
    let ingest = match dyngraph::generators::parse_temporal_file(std::io::BufReader::new(file)) {
        Ok(i) => i,
        Err(e) => return usage_error(&e.to_string()),
    };
    if let Err(e) = ingest.sequence.save(&args.out) {
        return usage_error(&format!("writing {}: {e}", args.out.display()));
    }
    println!(
        "wrote {} ({} ops, n={}, delta={}); dropped: {} duplicate inserts, {} absent deletes, {} self-loops",
        args.out.display(),
        ingest.sequence.len(),
        ingest.sequence.n(),
        ingest.sequence.delta_bound(),
        ingest.dropped_duplicate_inserts,
        ingest.dropped_missing_deletes,
        ingest.dropped_self_loops,
    );
    ExitCode::SUCCESS
}

fn cmd_run(args: RunArgs) -> ExitCode {
    let mut algos = Vec::new();
    for raw in &args.algo {
        match parse_algo(raw) {
            Ok(a) => algos.push(a),
            Err(e) => return usage_error(&e),
        }
    }
    let mut instances = Vec::new();
    for raw in &args.instance {
        match parse_instance(raw, args.init.clone()) {
            Ok(i) => instances.push(i),
            Err(e) => return usage_error(&e),
        }
    }
    let include_init = if args.include_init {
        Some(true)
    } else if args.exclude_init {
        Some(false)
    } else {
        None
    };

    let mut reports: Vec<BenchReport> = Vec::new();
    for algo in &algos {
        for instance in &instances {
            let config = RunConfig {
                algorithm: *algo,
                instance: instance.clone(),
                repetitions: args.reps,
                seed: args.seed,
                check_every: Some(args.check_every),
                include_init,
                delta_override: args.delta,
                cascade_cap: args.cascade_cap,
            };
            match run_benchmark(&config) {
                Ok(report) => reports.push(report),
                Err(BenchError::Correctness { op_index, what }) => {
                    eprintln!(
                        "correctness failure: {algo} on {}: op {op_index}: {what}",
                        instance.label()
                    );
                    return ExitCode::from(EXIT_CORRECTNESS);
                }
                Err(e) => return usage_error(&e.to_string()),
            }
        }
    }
    compute_slowdowns(&mut reports);

    let mut any_failed = false;
    for r in &reports {
        match (&r.failed, r.avg_ns_per_op, r.slowdown) {
            (Some(reason), _, _) => {
                any_failed = true;
                println!("{:<14} {:<40} FAILED: {reason}", r.algorithm, r.instance);
            }
            (None, Some(avg), Some(slow)) => {
                println!(
                    "{:<14} {:<40} {:>10} ops  {:>10.2} ns/op  (x{:.2})",
                    r.algorithm, r.instance, r.ops, avg, slow
                );
            }
            _ => {}
        }
        if args.counters && !r.counters.is_empty() {
            let rendered: Vec<String> = r
                .counters
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            println!("{:<14} counters: {}", "", rendered.join(", "));
        }
    }
    // Cross-instance aggregate per algorithm, when there is more than one.
    if instances.len() > 1 {
        for algo in &algos {
            let name = algo.to_string();
            let avgs: Vec<f64> = reports
                .iter()
                .filter(|r| r.algorithm == name)
                .filter_map(|r| r.avg_ns_per_op)
                .collect();
            if avgs.len() == instances.len() {
                if let Ok(g) = geometric_mean(&avgs) {
                    println!("{name:<14} geometric mean {g:.2} ns/op");
                }
            }
        }
    }
    if let Some(path) = &args.csv {
        if let Err(e) = std::fs::write(path, emit_csv(&reports)) {
            return usage_error(&format!("writing {}: {e}", path.display()));
        }
    }
    if any_failed {
        ExitCode::from(EXIT_ABORT)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_gen(args: GenArgs) -> ExitCode {
    let config = match GeneratorConfig::parse(&args.spec) {
        Ok(c) => c,
        Err(e) => return usage_error(&e.to_string()),
    };
    let target_seed = args.target_seed.unwrap_or(args.seed);
    let out = match config.generate(args.seed, target_seed) {
        Ok(o) => o,
        Err(e) => return usage_error(&e.to_string()),
    };
    if out.truncated {
        eprintln!("note: generator saturated before the requested length");
    }
    if let Some(init) = &out.init {
        let mut init_path = args.out.clone().into_os_string();
        init_path.push(".init");
        let init_path = PathBuf::from(init_path);
        if let Err(e) = init.save(&init_path) {
            return usage_error(&format!("writing {}: {e}", init_path.display()));
        }
        println!("wrote {} ({} ops)", init_path.display(), init.len());
    }
    if let Err(e) = out.main.save(&args.out) {
        return usage_error(&format!("writing {}: {e}", args.out.display()));
    }
    println!("wrote {} ({} ops)", args.out.display(), out.main.len());
    ExitCode::SUCCESS
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let algo = match parse_algo(&args.algo) {
        Ok(a) => a,
        Err(e) => return usage_error(&e),
    };
    let instance = match parse_instance(&args.instance, args.init.clone()) {
        Ok(i) => i,
        Err(e) => return usage_error(&e),
    };
    let config = RunConfig {
        algorithm: algo,
        instance,
        repetitions: 1,
        seed: args.seed,
        check_every: Some(args.check_every),
        include_init: None,
        delta_override: args.delta,
        cascade_cap: None,
    };
    match run_verify(&config) {
        Ok(outcome) => {
            println!(
                "ok: {} ops, {} checkpoints, all checks passed",
                outcome.ops, outcome.checkpoints
            );
            ExitCode::SUCCESS
        }
        Err(BenchError::Correctness { op_index, what }) => {
            eprintln!("correctness failure at op {op_index}: {what}");
            ExitCode::from(EXIT_CORRECTNESS)
        }
        Err(BenchError::Abort(e)) => {
            eprintln!("algorithm abort: {e}");
            ExitCode::from(EXIT_ABORT)
        }
        Err(e) => usage_error(&e.to_string()),
    }
}
