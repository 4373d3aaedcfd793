//! End-to-end checks of the `bench` binary: exit codes, the gen → verify →
//! run pipeline, file formats, and the temporal ingester.

use std::process::{Command, Output};

use dyngraph::graph::UpdateSequence;

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bench"))
        .args(args)
        .output()
        .expect("bench binary should run")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

#[test]
fn usage_errors_exit_2() {
    let out = bench(&["run", "--algo", "nosuchalgo", "--instance", "er:n=8,m=4"]);
    assert_eq!(code(&out), 2);
    let out = bench(&["run", "--algo", "countcol", "--instance", "warp:n=8"]);
    assert_eq!(code(&out), 2);
    let out = bench(&["frobnicate"]);
    assert_eq!(code(&out), 2, "clap usage errors exit 2");
    let out = bench(&["verify", "--algo", "countcol", "--instance", "/no/such/file.seq"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn gen_verify_run_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let seq_path = dir.path().join("er.seq");
    let seq_str = seq_path.to_str().unwrap();

    let out = bench(&[
        "gen",
        "--spec",
        "er:n=128,m=1024,rho=0.5",
        "--seed",
        "7",
        "--out",
        seq_str,
    ]);
    assert_eq!(code(&out), 0, "gen failed: {}", String::from_utf8_lossy(&out.stderr));
    let seq = UpdateSequence::load(&seq_path).unwrap();
    assert_eq!(seq.n(), 128);
    assert_eq!(
        seq.ops()
            .iter()
            .filter(|o| o.kind == dyngraph::graph::UpdateKind::Insert)
            .count(),
        1024
    );

    let out = bench(&["verify", "--algo", "randr2match", "--instance", seq_str, "--seed", "3"]);
    assert_eq!(code(&out), 0, "verify failed: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("all checks passed"), "unexpected: {stdout}");

    let csv_path = dir.path().join("report.csv");
    let out = bench(&[
        "run",
        "--algo",
        "trivialmatch,randr2match",
        "--instance",
        seq_str,
        "--reps",
        "2",
        "--seed",
        "1",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "run failed: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "algorithm,instance,ops,avg_ns_per_op,slowdown,failed");
    assert_eq!(lines.len(), 3);
    // Exactly one 1.00 slowdown in the group.
    let ones = lines[1..]
        .iter()
        .filter(|l| l.split(',').nth(4) == Some("1.00"))
        .count();
    assert_eq!(ones, 1, "csv: {csv}");
}

#[test]
fn verify_catches_an_invalid_sequence_file() {
    // A duplicate insert must be rejected at ingestion (usage error), not
    // fed to the algorithms.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.seq");
    std::fs::write(&path, "n 4\ni 0 1\ni 1 0\n").unwrap();
    let out = bench(&["verify", "--algo", "trivialmatch", "--instance", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn run_reports_cascade_aborts_with_exit_3() {
    // A clashing adversary against a recurse instance whose cascade cap is
    // absurdly low: the recolor aborts, the run exits 3, and the CSV row is
    // marked failed with empty timing columns.
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("abort.csv");
    let out = bench(&[
        "run",
        "--algo",
        "recursecol",
        "--instance",
        "clash:algo=recursecol,n=64,delta=16,count=400",
        "--reps",
        "1",
        "--seed",
        "5",
        "--cascade-cap",
        "1",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAILED"), "{stdout}");
    assert!(stdout.contains("non-terminating cascade"), "{stdout}");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert!(row.ends_with(",,,1"), "failed row should be empty-timed: {row}");
}

#[test]
fn gen_writes_init_file_for_equal_degree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eq.seq");
    let out = bench(&[
        "gen",
        "--spec",
        "eqdeg:n=64,delta=8,updates=200",
        "--seed",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let init_path = dir.path().join("eq.seq.init");
    assert!(init_path.exists(), "missing init preamble file");
    let init = UpdateSequence::load(&init_path).unwrap();
    let main = UpdateSequence::load(&path).unwrap();
    assert!(!init.is_empty() && !main.is_empty());

    // The --init preamble flows through verify.
    let out = bench(&[
        "verify",
        "--algo",
        "hiercol",
        "--instance",
        path.to_str().unwrap(),
        "--init",
        init_path.to_str().unwrap(),
        "--delta",
        "8",
        "--check-every",
        "50",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn ingest_converts_temporal_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("konect.txt");
    std::fs::write(
        &input,
        "% directed temporal graph\n10 20 1 100\n20 10 1 110\n10 30 +1 120\n10 20 -1 130\n7 7 1 140\n",
    )
    .unwrap();
    let out_path = dir.path().join("konect.seq");
    let out = bench(&[
        "ingest",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("1 duplicate inserts"), "{stdout}");
    assert!(stdout.contains("1 self-loops"), "{stdout}");
    let seq = UpdateSequence::load(&out_path).unwrap();
    assert_eq!(seq.len(), 3);
    assert_eq!(seq.n(), 3);

    let bogus = dir.path().join("bogus.txt");
    std::fs::write(&bogus, "1 2\n").unwrap();
    let out = bench(&[
        "ingest",
        "--input",
        bogus.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn run_accepts_inline_generator_specs() {
    let out = bench(&[
        "run",
        "--algo",
        "countcol",
        "--instance",
        "er:n=64,m=256,rho=0.25",
        "--reps",
        "1",
        "--seed",
        "9",
        "--check-every",
        "1",
        "--counters",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("countcol"), "{stdout}");
    assert!(stdout.contains("recolors="), "{stdout}");
}
