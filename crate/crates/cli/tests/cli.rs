//! End-to-end tests driving the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stripspec"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn roots_summary_reports_both_constants() {
    let out = run(&["roots"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("s1 = 0.039434263"), "{s}");
    assert!(s.contains("t1 = 0.061438044"), "{s}");
}

#[test]
fn roots_json_report_has_envelope_and_config_echo() {
    let out = run(&["roots", "--json", "--tol", "1e-10"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(v["command"], "roots");
    assert_eq!(v["config"]["tol"], 1e-10);
    let s1 = v["results"]["s1"]["value"].as_f64().unwrap();
    assert!((s1 - 0.039434263463720774).abs() < 1e-9);
    assert!(v["results"]["t1"]["residual"].as_f64().is_some());
    assert!(v["results"]["s1"]["bracket"].as_array().is_some());
}

#[test]
fn csv_output_is_rfc4180_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("one.csv");
    let p2 = dir.path().join("two.csv");
    for p in [&p1, &p2] {
        let out = run(&[
            "lambda-profile",
            "--samples",
            "11",
            "--mesh",
            "256",
            "--out-csv",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let b1 = std::fs::read(&p1).unwrap();
    let b2 = std::fs::read(&p2).unwrap();
    assert_eq!(b1, b2, "identical configuration must give identical bytes");
    let text = String::from_utf8(b1).unwrap();
    let mut lines = text.split("\r\n");
    assert_eq!(lines.next(), Some("v,lambda"));
    let first = lines.next().unwrap();
    assert_eq!(first.split(',').count(), 2);
    assert!(!text.contains('\t'));
    // 11 samples + header + trailing empty fragment after final CRLF
    assert_eq!(text.split("\r\n").count(), 13);
}

#[test]
fn optimize_writes_scan_and_refinement_tables() {
    let dir = tempfile::tempdir().unwrap();
    let scan = dir.path().join("scan.csv");
    let out = run(&[
        "optimize-theta",
        "--scan-points",
        "32",
        "--tol",
        "1e-3",
        "--out-csv",
        scan.to_str().unwrap(),
        "--json",
    ]);
    assert!(out.status.success());
    assert!(scan.exists());
    assert!(dir.path().join("scan.refinement.csv").exists());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let theta = v["results"]["theta_star"].as_f64().unwrap();
    assert!((theta - 0.7741).abs() < 5e-3);
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "tol = 1e-6\n").unwrap();
    let from_file = run(&["roots", "--json", "--config", cfg.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&from_file)).unwrap();
    assert_eq!(v["config"]["tol"], 1e-6);
    let overridden = run(&[
        "roots",
        "--json",
        "--config",
        cfg.to_str().unwrap(),
        "--tol",
        "1e-8",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&overridden)).unwrap();
    assert_eq!(v["config"]["tol"], 1e-8);
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "no_such_key = 3\n").unwrap();
    let out = run(&["roots", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_geometry_exits_with_config_code() {
    let out = run(&["spectrum-2d", "--a", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn straddling_bracket_exits_with_inconclusive_code() {
    let out = run(&["spectrum-2d", "--eps", "0.64", "--nys", "16,32,64"]);
    assert_eq!(out.status.code(), Some(4));
    // the report is still produced before the exit status
    assert!(stdout(&out).contains("inconclusive"));
}

#[test]
fn negative_eps_flag_parses() {
    let out = run(&["hardy-check", "--weight", "negative", "--eps", "-0.3", "--nys", "16,32"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("holds"));
}

#[test]
fn roots_rejects_csv_export() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.csv");
    let out = run(&["roots", "--out-csv", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!p.exists());
}

#[test]
fn summaries_quote_threshold_units() {
    let out = run(&["spectrum-2d", "--eps", "-0.2", "--nys", "16,32,64"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("absolute"), "{s}");
    assert!(s.contains("x (pi/4a)^2"), "{s}");
}

fn help_of(arg: &str) -> String {
    let out = run(&[arg, "--help"]);
    assert!(out.status.success());
    stdout(&out)
}

#[test]
fn help_documents_units_for_every_subcommand() {
    for cmd in [
        "lambda-profile",
        "optimize-theta",
        "spectrum-2d",
        "critical-eps",
        "hardy-check",
        "hc-lemma",
        "hardy-failure",
    ] {
        let h = help_of(cmd);
        assert!(
            h.contains("length units") || h.contains("units of a") || h.contains("1/length^2"),
            "{cmd} help lacks unit documentation:\n{h}"
        );
    }
}
