//! End-to-end tests of the `lzb` binary: frozen example outputs, the
//! exit-code contract, output formats, configuration precedence, and
//! byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn lzb() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lzb"))
}

fn run(args: &[&str]) -> Output {
    lzb().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn schur_example_is_frozen() {
    let out = run(&["sym", "schur", "--shape", "2,1", "--vars", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "x1^2*x2 + x1*x2^2\n");
}

#[test]
fn lr_example_is_frozen() {
    let out = run(&["sym", "lr", "--lam", "2,1", "--mu", "1", "--nu", "1,1"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "1\n");
}

#[test]
fn psi_example_is_frozen() {
    let out = run(&["sym", "psi", "--outer", "2", "--inner", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "(1 - t + q - q*t)/(1 - q*t)\n");
}

#[test]
fn psi_rejects_non_strips() {
    let out = run(&["sym", "psi", "--outer", "1", "--inner", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn branching_verification_passes() {
    let out = run(&[
        "verify", "branching", "--n", "3", "--i", "2", "--m", "2", "--trunc", "8",
    ]);
    assert!(out.status.success());
    assert!(stdout_of(&out).starts_with("PASS  branching/n3/i2/m2/order8"));
}

#[test]
fn sum_verification_passes_and_reports_json() {
    let out = run(&["verify", "sum", "--n", "3", "--lam", "1,1", "--trunc", "8"]);
    assert!(out.status.success());

    let out = run(&[
        "--format", "json", "verify", "sum", "--n", "3", "--lam", "1,1",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let line: serde_json::Value = serde_json::from_str(text.trim()).expect("one json object");
    assert_eq!(line["key"], "sum/rank3/m0,1,0/order8");
    assert_eq!(line["report"]["status"], "pass");
}

#[test]
fn injected_failure_flips_the_exit_code() {
    let out = run(&["verify", "sum", "--n", "3", "--lam", "1,1", "--perturb"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&[
        "--format", "json", "verify", "sum", "--n", "3", "--lam", "1,1", "--perturb",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_of(&out);
    let line: serde_json::Value = serde_json::from_str(text.trim()).expect("one json object");
    assert_eq!(line["report"]["status"], "fail");
    assert!(line["report"]["first_mismatch"].is_object());
}

#[test]
fn usage_errors_exit_two() {
    let missing = run(&["sym", "schur", "--shape", "2,1"]);
    assert_eq!(missing.status.code(), Some(2));

    let unknown = run(&["sym", "bogus"]);
    assert_eq!(unknown.status.code(), Some(2));

    let bad_trunc = run(&["--trunc", "0", "verify", "sum", "--n", "2", "--lam", "1"]);
    assert_eq!(bad_trunc.status.code(), Some(2));

    let bad_partition = run(&["sym", "schur", "--shape", "1,2", "--vars", "2"]);
    assert_eq!(bad_partition.status.code(), Some(2));
}

#[test]
fn constants_example_is_frozen() {
    let out = run(&["qrep", "constants", "--n", "2", "--eps", "-1"]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(stdout_of(&out).trim()).expect("json constants");
    assert_eq!(v["b"]["1"], -1);
    assert_eq!(v["a"]["2"], 0);
}

#[test]
fn output_is_deterministic_and_parallelism_invariant() {
    let args = [
        "--format",
        "json",
        "verify",
        "macdonald-schur",
        "--size",
        "3",
        "--vars",
        "2",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let mut parallel_args = vec!["--parallel", "4"];
    parallel_args.extend_from_slice(&args);
    let parallel = run(&parallel_args);
    assert!(parallel.status.success());
    assert_eq!(first.stdout, parallel.stdout);
}

fn demazure_order(dir: &Path, extra: &[&str]) -> i64 {
    let mut cmd = lzb();
    cmd.env("LZB_CONFIG", dir.join("cfg.json"));
    cmd.args(extra);
    cmd.args(["char", "demazure", "--n", "2", "--lam", "1"]);
    let out = cmd.output().expect("binary runs");
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(stdout_of(&out).trim()).expect("json character");
    v["character"]["order"].as_i64().expect("order field")
}

#[test]
fn config_file_applies_and_flags_win() {
    let dir = tempfile::tempdir().expect("tempdir");
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"trunc": 5, "format": "json"}"#,
    )
    .expect("write config");
    assert_eq!(demazure_order(dir.path(), &[]), 5);
    assert_eq!(demazure_order(dir.path(), &["--trunc", "6"]), 6);

    std::fs::write(dir.path().join("cfg.json"), r#"{"nope": 1}"#).expect("write config");
    let mut cmd = lzb();
    cmd.env("LZB_CONFIG", dir.path().join("cfg.json"));
    cmd.args(["sym", "lr", "--lam", "1", "--mu", "1", "--nu", "1"]);
    let out = cmd.output().expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_file_and_keeps_stdout_empty() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("result.txt");
    let out = lzb()
        .args(["--out"])
        .arg(&path)
        .args(["sym", "lr", "--lam", "2,1", "--mu", "1", "--nu", "1,1"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).expect("read result"), "1\n");
}

#[test]
fn csv_quotes_keys_that_contain_commas() {
    let out = run(&[
        "--format", "csv", "verify", "sum", "--n", "2", "--lam", "2,1",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("case,status"));
    assert_eq!(lines.next(), Some("\"sum/rank2/m1,1/order8\",pass"));
}
