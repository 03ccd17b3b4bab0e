//! End-to-end tests of the `thinpoint` binary: flag grammar, exact output,
//! exit codes, and byte-for-byte reproducibility across reruns and thread
//! counts. Each test gets its own scratch directory so they can run in
//! parallel.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU64, Ordering};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_thinpoint"));
    // The suite must not depend on the environment it happens to run in.
    cmd.env_remove("THINPOINT_THREADS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exited, not signalled")
}

fn scratch(tag: &str) -> PathBuf {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let dir = std::env::temp_dir().join(format!(
        "thinpoint-cli-{tag}-{}-{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).expect("scratch dir is creatable");
    dir
}

fn json(output: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(output)).expect("stdout is JSON")
}

fn json_file(path: &PathBuf) -> serde_json::Value {
    let text = std::fs::read_to_string(path).expect("file exists");
    serde_json::from_str(&text).expect("file is JSON")
}

#[test]
fn disc_prints_the_exact_statistic_for_a_point_file() {
    let dir = scratch("disc");
    let file = dir.join("points.txt");
    std::fs::write(&file, "# three points, deliberately out of order\n0.75\n\n0.25\n0.5\n")
        .unwrap();
    let out = run(&["disc", "--in", file.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "0.25\n");
}

#[test]
fn disc_rejects_malformed_lines_with_the_line_number() {
    let dir = scratch("badfile");
    let file = dir.join("points.txt");
    std::fs::write(&file, "0.1\n0.2\nwoops\n0.4\n").unwrap();
    let out = run(&["disc", "--in", file.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 3"), "stderr: {}", stderr(&out));
}

#[test]
fn disc_generation_is_seeded_and_reproducible() {
    let a = run(&["disc", "--n", "2000", "--seed", "9"]);
    let b = run(&["disc", "--n", "2000", "--seed", "9"]);
    let c = run(&["disc", "--n", "2000", "--seed", "10"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(stdout(&a), stdout(&c));

    // --n without --seed is a parse error: no hidden entropy source.
    let missing = run(&["disc", "--n", "2000"]);
    assert_eq!(code(&missing), 2);

    // No input source at all is a usage error.
    let none = run(&["disc"]);
    assert_eq!(code(&none), 2);
    assert!(stderr(&none).contains("input source"), "stderr: {}", stderr(&none));
}

#[test]
fn thin_below_threshold_keeps_everything_and_round_trips() {
    let dir = scratch("noop");
    let kept = dir.join("kept.txt");
    let report_path = dir.join("report.json");
    let out = run(&[
        "thin", "--n", "1000", "--m", "5", "--seed", "3",
        "--out", kept.to_str().unwrap(),
        "--report", report_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let report = json_file(&report_path);
    assert_eq!(report["plan"]["regime"], "NoDeletion");
    assert_eq!(report["n_in"], 1000);
    assert_eq!(report["n_kept"], 1000);

    // The kept file is the generated sample, so its discrepancy matches
    // what `disc` computes for the same n and seed, digit for digit.
    let direct = run(&["disc", "--n", "1000", "--seed", "3"]);
    let from_file = run(&["disc", "--in", kept.to_str().unwrap()]);
    assert_eq!(stdout(&direct), stdout(&from_file));
}

#[test]
fn thin_reports_the_two_bin_plan_at_the_flagship_scale() {
    let out = run(&["thin", "--n", "100000", "--m", "5000", "--seed", "1"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["plan"]["regime"], "Thin");
    assert_eq!(report["plan"]["k"], 2);
    assert_eq!(report["plan"]["cap"], 47600);
    assert_eq!(report["n_in"], 100000);
    let deleted = report["n_in"].as_u64().unwrap() - report["n_kept"].as_u64().unwrap();
    assert!(deleted <= 5000, "deleted {deleted}");
    assert!(
        report["discrepancy_after"].as_f64().unwrap()
            < report["discrepancy_before"].as_f64().unwrap()
    );
}

#[test]
fn online_and_offline_paths_agree_through_the_cli() {
    let dir = scratch("paths");
    let offline_path = dir.join("offline.json");
    let online_path = dir.join("online.json");
    let base = [
        "thin", "--n", "50000", "--m", "5000", "--seed", "11", "--preset", "aggressive",
    ];

    let mut offline_args: Vec<&str> = base.to_vec();
    offline_args.extend(["--report", offline_path.to_str().unwrap()]);
    let out = run(&offline_args);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let mut online_args: Vec<&str> = base.to_vec();
    online_args.extend(["--online", "--report", online_path.to_str().unwrap()]);
    let out = run(&online_args);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let offline = json_file(&offline_path);
    let online = json_file(&online_path);
    assert_eq!(offline["per_bin_kept"], online["per_bin_kept"]);
    assert_eq!(offline["n_kept"], online["n_kept"]);
}

#[test]
fn oversized_budget_is_a_usage_error() {
    let out = run(&["thin", "--n", "1000", "--m", "500", "--seed", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).starts_with("error:"), "stderr: {}", stderr(&out));

    // Missing --seed never falls back to ambient entropy.
    let out = run(&["thin", "--n", "100", "--m", "5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bound_prints_frozen_reference_values() {
    let theorem = run(&["bound", "--kind", "theorem", "--n", "100000", "--m", "5000"]);
    assert_eq!(stdout(&theorem), "0.23025850929940456\n");

    let proof = run(&["bound", "--kind", "proof", "--kept", "95200", "--k", "2"]);
    assert_eq!(stdout(&proof), "0.07990567706736627\n");

    let kolmogorov = run(&["bound", "--kind", "kolmogorov", "--z", "1"]);
    assert_eq!(stdout(&kolmogorov), "0.26999967167735456\n");

    let plan = run(&["bound", "--kind", "plan", "--n", "100000", "--m", "5000"]);
    assert_eq!(code(&plan), 0);
    let plan_json: serde_json::Value = serde_json::from_str(&stdout(&plan)).unwrap();
    assert_eq!(plan_json["regime"], "Thin");
    assert_eq!(plan_json["k"], 2);

    let missing = run(&["bound", "--kind", "chernoff", "--mu", "100"]);
    assert_eq!(code(&missing), 2);
    assert!(stderr(&missing).contains("--delta"), "stderr: {}", stderr(&missing));
}

#[test]
fn sweep_is_byte_identical_across_reruns_and_thread_counts() {
    let args = [
        "sweep", "--n", "20000", "--m-list", "800,2000", "--trials", "3", "--seed", "5",
    ];
    let first = run(&args);
    assert_eq!(code(&first), 0, "stderr: {}", stderr(&first));
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);

    let single = bin().args(args).env("THINPOINT_THREADS", "1").output().unwrap();
    let triple = bin().args(args).env("THINPOINT_THREADS", "3").output().unwrap();
    assert_eq!(first.stdout, single.stdout);
    assert_eq!(first.stdout, triple.stdout);

    let result = json(&first);
    assert_eq!(result["records"].as_array().unwrap().len(), 6);
    assert_eq!(result["config"]["trials"], 3);
    assert!(result["summary"].get("800").is_some());
    assert!(result["summary"].get("2000").is_some());
    assert!(result["violation_rate"].is_number());
    for record in result["records"].as_array().unwrap() {
        if record["m"] == 800 {
            // Below the deletion threshold for n = 20000.
            assert_eq!(record["deletions"], 0);
        }
        assert!(record["deletions"].as_u64().unwrap() <= record["m"].as_u64().unwrap());
    }
}

#[test]
fn sweep_csv_has_the_documented_header() {
    let out = run(&[
        "sweep", "--n", "5000", "--m-list", "500", "--trials", "2", "--seed", "1",
        "--format", "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m,trial_index,seed_used,disc_before,disc_after,n_kept,deletions,deficient_count,theorem_bound_value,proof_bound_value"
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn sweep_rejects_a_malformed_thread_count() {
    let out = bin()
        .args(["sweep", "--n", "5000", "--m-list", "500", "--trials", "1", "--seed", "1"])
        .env("THINPOINT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("THINPOINT_THREADS"), "stderr: {}", stderr(&out));
}

#[test]
fn write_failures_exit_3_without_partial_output() {
    let out = run(&[
        "sweep", "--n", "5000", "--m-list", "500", "--trials", "1", "--seed", "1",
        "--out", "/no-such-dir/result.json",
    ]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
}

#[test]
fn profile_writes_a_csv_pair() {
    let dir = scratch("profile");

    // Below the threshold both profiles describe the same point set.
    let base = dir.join("noop");
    let out = run(&["profile", "--n", "1000", "--m", "5", "--seed", "3",
        "--out", base.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let printed = stdout(&out);
    let before_path = dir.join("noop.before.csv");
    let after_path = dir.join("noop.after.csv");
    assert!(printed.contains("noop.before.csv") && printed.contains("noop.after.csv"));
    let before = std::fs::read(&before_path).unwrap();
    let after = std::fs::read(&after_path).unwrap();
    assert_eq!(before, after);
    assert!(String::from_utf8(before).unwrap().starts_with("i,position,deviation\n"));

    // A binding budget separates them.
    let base = dir.join("thinned");
    let out = run(&["profile", "--n", "20000", "--m", "2000", "--seed", "4",
        "--out", base.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let before = std::fs::read(dir.join("thinned.before.csv")).unwrap();
    let after = std::fs::read(dir.join("thinned.after.csv")).unwrap();
    assert_ne!(before, after);
}
