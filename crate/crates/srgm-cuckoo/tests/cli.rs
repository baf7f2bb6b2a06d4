//! End-to-end runs of the compiled binary: exit codes, report formats,
//! and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

use srgm_cuckoo::CsConfig;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_srgm-cuckoo"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

/// A small noisy dataset to fit against, written via the binary itself.
fn gen_dataset(dir: &Path) -> String {
    let path = dir.join("gen-go.csv");
    let path_str = path.to_str().unwrap().to_string();
    let out = run(&[
        "gen",
        "--model",
        "go",
        "--a",
        "120",
        "--b",
        "0.08",
        "--times",
        "1..20",
        "--noise-sd",
        "3",
        "--seed",
        "11",
        "--out",
        &path_str,
    ]);
    assert!(out.status.success(), "gen failed: {}", stderr_str(&out));
    path_str
}

#[test]
fn fit_emits_parseable_json_with_default_config_echo() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let out = run(&["fit", "--model", "go", "--data", &data, "--seeds", "2"]);
    assert!(out.status.success(), "fit failed: {}", stderr_str(&out));

    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["model"], "go");
    assert_eq!(report["train_fraction"], 0.7);
    assert!(report["params"]["a"].as_f64().unwrap() > 0.0);
    assert!(report["train_rmse"].as_f64().unwrap() >= 0.0);
    assert!(!report["test_rmse"].is_null(), "0.7 split leaves test data");
    assert!(report["aggregate"]["seed_count"].is_number() || report["aggregate"].is_object());

    // omitting every engine flag must reproduce the documented defaults
    let echoed = report["config"].clone();
    let want = serde_json::to_value(CsConfig::default()).unwrap();
    assert_eq!(echoed, want);
}

#[test]
fn unknown_model_is_usage_error_listing_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let out = run(&["fit", "--model", "bogus", "--data", &data]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_str(&out);
    for kind in ["go", "pow", "dss", "mo"] {
        assert!(err.contains(kind), "missing {kind} in: {err}");
    }
}

#[test]
fn decreasing_counts_are_data_error_naming_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "time,failures\n1,5\n2,9\n3,4\n4,10\n").unwrap();
    let out = run(&["validate", "--data", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_str(&out);
    assert!(err.contains("line 4"), "no line number in: {err}");
    assert!(err.contains("decreased"), "invariant not named in: {err}");
}

#[test]
fn reruns_emit_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let args = [
        "fit",
        "--model",
        "dss",
        "--data",
        &data,
        "--seeds",
        "3",
        "--generations",
        "40",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn gen_then_validate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let out = run(&["validate", "--data", &data]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("records: 20"), "unexpected summary: {text}");
    assert!(
        text.contains("dataset: gen-go"),
        "unexpected summary: {text}"
    );
}

#[test]
fn out_flag_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let report_path = dir.path().join("report.json");
    let out = run(&[
        "fit",
        "--model",
        "go",
        "--data",
        &data,
        "--generations",
        "20",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout_str(&out).is_empty(), "report went to the file");
    let text = std::fs::read_to_string(&report_path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["model"], "go");
}

#[test]
fn train_fraction_below_half_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let out = run(&[
        "fit",
        "--model",
        "go",
        "--data",
        &data,
        "--train-fraction",
        "0.3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("0.3"));
}

#[test]
fn csv_format_uses_documented_header() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let out = run(&[
        "fit",
        "--model",
        "mo",
        "--data",
        &data,
        "--generations",
        "20",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "model,dataset,train_fraction,seed,a,b,train_rmse,test_rmse"
    );
    assert_eq!(text.lines().count(), 2, "header plus one row");
}

#[test]
fn split_study_defaults_to_descending_fraction_grid() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let out = run(&[
        "split-study",
        "--model",
        "go",
        "--data",
        &data,
        "--seeds",
        "1",
        "--generations",
        "10",
        "--format",
        "csv",
    ]);
    assert!(
        out.status.success(),
        "split-study failed: {}",
        stderr_str(&out)
    );
    let text = stdout_str(&out);
    let fractions: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(fractions, ["0.9", "0.8", "0.7", "0.6", "0.5"]);
}

#[test]
fn compare_writes_plot_rows_per_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let plots = dir.path().join("plots");
    let out = run(&[
        "compare",
        "--model",
        "go",
        "--model",
        "pow",
        "--data",
        &data,
        "--seeds",
        "1",
        "--generations",
        "10",
        "--plot-dir",
        plots.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "compare failed: {}", stderr_str(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["cells"].as_array().unwrap().len(), 2);

    let plot = std::fs::read_to_string(plots.join("gen-go.dat")).unwrap();
    assert!(plot.starts_with("# model group value\n"), "got: {plot}");
    assert!(plot.contains("go cs "));
    assert!(plot.contains("pow cs "));
}

#[test]
fn timestamp_flag_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let plain = run(&[
        "fit",
        "--model",
        "go",
        "--data",
        &data,
        "--generations",
        "10",
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&plain)).unwrap();
    assert!(report.get("timestamp").is_none());

    let stamped = run(&[
        "fit",
        "--model",
        "go",
        "--data",
        &data,
        "--generations",
        "10",
        "--timestamp",
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&stamped)).unwrap();
    assert!(report["timestamp"].is_u64(), "missing timestamp");
}

#[test]
fn inverted_bounds_are_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_dataset(dir.path());
    let out = run(&[
        "fit",
        "--model",
        "go",
        "--data",
        &data,
        "--bounds",
        "1:10:0.5:0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("bounds"));
}

#[test]
fn help_and_version_exit_zero() {
    assert!(run(&["--help"]).status.success());
    assert!(run(&["--version"]).status.success());
    let sub = run(&["fit", "--help"]);
    assert!(sub.status.success());
}
