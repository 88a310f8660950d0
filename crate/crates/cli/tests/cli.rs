//! End-to-end tests against the compiled binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn freelunch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freelunch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, contents: &str) -> String {
    let path = dir.join("config.toml");
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn list_names_experiments_and_learners() {
    let out = freelunch(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("nfl-f-average"));
    assert!(text.contains("head-to-head"));
    assert!(text.contains("majority"));
    assert!(text.contains("cv:<min|max>:"));
}

#[test]
fn bad_config_exits_2_with_field_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "experiment = \"nfl-f-average\"\nlearners = [\"majorty\"]\n",
    );
    let out = freelunch(&["run", "--config", &config]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("field `learners`"), "stderr: {err}");
}

#[test]
fn counterexample_run_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "experiment = \"counterexample\"\n");
    let out_dir = dir.path().join("out");
    let out = freelunch(&[
        "run",
        "--config",
        &config,
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.contains("verdict,counterexample"),
        "stdout: {stdout}"
    );
    assert!(stdout.contains(",PASS,"), "stdout: {stdout}");
    for name in ["counterexample.csv", "verdicts.txt", "run.txt"] {
        assert!(out_dir.join(name).exists(), "missing {name}");
    }
    // Exact rationals in the CSV, never decimals.
    let csv = fs::read_to_string(out_dir.join("counterexample.csv")).unwrap();
    assert!(csv.contains("1/2"), "csv: {csv}");
    assert!(!csv.contains("0.5"), "csv: {csv}");
}

#[test]
fn failing_check_exits_1() {
    // With replacement, repeated-input training sets break the construction,
    // so the expected cost drops below one and the check must FAIL.
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "experiment = \"counterexample\"\nreplacement = true\n",
    );
    let out_dir = dir.path().join("out");
    let out = freelunch(&[
        "run",
        "--config",
        &config,
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains(",FAIL,"), "stdout: {stdout}");
}

#[test]
fn reruns_are_byte_identical_for_same_config_and_seed() {
    // prior-average mixes exact enumeration with seeded Monte Carlo, so it
    // exercises determinism of both report kinds.
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "experiment = \"prior-average\"\nn_samples = 50\n",
    );
    let mut snapshots = Vec::new();
    for run in 0..2 {
        let out_dir = dir.path().join(format!("out{run}"));
        let out = freelunch(&[
            "run",
            "--config",
            &config,
            "--seed",
            "7",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&out_dir)
            .unwrap()
            .map(|entry| {
                let entry = entry.unwrap();
                let name = entry.file_name().into_string().unwrap();
                (name, fs::read(entry.path()).unwrap())
            })
            // run.txt carries wall time, which is the one thing allowed to
            // differ between reruns.
            .filter(|(name, _)| name != "run.txt")
            .collect();
        files.sort();
        snapshots.push(files);
    }
    assert_eq!(snapshots[0], snapshots[1]);
}

#[test]
fn seed_changes_sampled_reports_only() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "experiment = \"prior-average\"\nn_samples = 50\n",
    );
    let mut sampled = Vec::new();
    let mut exact = Vec::new();
    for seed in ["7", "8"] {
        let out_dir = dir.path().join(format!("seed{seed}"));
        let out = freelunch(&[
            "run",
            "--config",
            &config,
            "--seed",
            seed,
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        sampled.push(fs::read(out_dir.join("prior_average_samples.csv")).unwrap());
        exact.push(fs::read(out_dir.join("prior_average_exact.csv")).unwrap());
    }
    assert_ne!(sampled[0], sampled[1]);
    assert_eq!(exact[0], exact[1]);
}

#[test]
fn verify_all_small_passes() {
    let out = freelunch(&["verify-all", "--profile", "small"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.contains("summary,10/10 criteria passed"),
        "stdout: {stdout}"
    );
}
