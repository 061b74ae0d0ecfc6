//! End-to-end checks of the binary: subcommand output files, stdout/stderr
//! separation, and the exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn deltaspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltaspec"))
        .args(args)
        .output()
        .expect("failed to run deltaspec")
}

fn write_problem(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const NEUMANN_FREE: &str = r#"{
  "timescale": [
    {"type": "point", "at": 0}, {"type": "point", "at": 1},
    {"type": "point", "at": 2}, {"type": "point", "at": 3}
  ],
  "potential": [
    {"kind": "const", "value": 0}, {"kind": "const", "value": 0},
    {"kind": "const", "value": 0}, {"kind": "const", "value": 0}
  ],
  "ha": 0, "hb": 0
}"#;

const COROLLARY2_INSTANCE: &str = r#"{
  "timescale": [
    {"type": "point", "at": 0}, {"type": "point", "at": 1},
    {"type": "point", "at": 2}, {"type": "point", "at": 3}
  ],
  "potential": [
    {"kind": "const", "value": 1}, {"kind": "const", "value": -1},
    {"kind": "const", "value": 0}, {"kind": "const", "value": 0}
  ],
  "ha": 0, "hb": 0
}"#;

// 1 + h_a mu(a) = -1: outside the identification theorem's validity
// regime, so the threshold condition holds with nonconstant q
const FALSIFYING_INSTANCE: &str = r#"{
  "timescale": [
    {"type": "point", "at": 0}, {"type": "point", "at": 1},
    {"type": "point", "at": 2}, {"type": "point", "at": 3}
  ],
  "potential": [
    {"kind": "const", "value": 5}, {"kind": "const", "value": 4.9},
    {"kind": "const", "value": 0}, {"kind": "const", "value": 0}
  ],
  "ha": -2, "hb": 0
}"#;

const CONTINUOUS: &str = r#"{
  "timescale": [{"type": "interval", "from": 0, "to": 1}],
  "potential": [{"kind": "const", "value": 0}],
  "ha": 0, "hb": 0
}"#;

#[test]
fn solve_writes_report_and_eigenfunctions() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), "p.json", NEUMANN_FREE);
    let report = dir.path().join("r.json");
    let csv = dir.path().join("e.csv");

    let out = deltaspec(&[
        "solve",
        "--problem",
        &problem,
        "--num-eigs",
        "2",
        "--tol",
        "1e-13",
        "--out",
        report.to_str().unwrap(),
        "--eigenfunctions",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty(), "report went to --out, stdout must stay clean");

    let report: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    let eigs = report["eigenvalues"].as_array().unwrap();
    assert_eq!(eigs.len(), 2);
    assert!(eigs[0].as_f64().unwrap().abs() < 1e-11);
    assert!((eigs[1].as_f64().unwrap() - 2.0).abs() < 1e-11);
    assert_eq!(report["zero_counts"][0], 0);
    assert_eq!(report["zero_counts"][1], 1);
    assert_eq!(report["verdicts"]["theorem1"], "theorem-applies-q-constant");

    let csv = std::fs::read_to_string(csv).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,y1,y2");
    assert_eq!(lines.count(), 4); // one row per grid point
    // constant first eigenfunction at full precision
    assert!(csv.lines().nth(1).unwrap().starts_with("0.0000000000000000e0,1.0000000000000000e0"));
}

#[test]
fn solve_defaults_print_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), "p.json", CONTINUOUS);
    let out = deltaspec(&["solve", "--problem", &problem, "--tol", "1e-15"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    // default --num-eigs is min(M, 8); M = 999 at the default step 1e-3
    assert_eq!(report["eigenvalues"].as_array().unwrap().len(), 8);
    let lambda2 = report["eigenvalues"][1].as_f64().unwrap();
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    assert!((lambda2 - pi2).abs() / pi2 < 5e-3, "lambda2 = {lambda2}");
    assert_eq!(report["grid"]["n_points"], 1001);
}

#[test]
fn verify_all_reports_verdicts_and_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), "p.json", COROLLARY2_INSTANCE);
    let out = deltaspec(&["verify", "--problem", &problem, "--check", "all", "--tol", "1e-13"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdicts"]["theorem1"], "hypothesis-not-met");
    assert_eq!(report["verdicts"]["corollary1"], "mean-mismatch");
    assert_eq!(report["verdicts"]["corollary2"], "negative-eigenvalue-found");
    assert_eq!(report["verdicts"]["remark"], "hypothesis-not-met");
    assert_eq!(report["falsified"], false);
    let lambda1 = report["lambda1"].as_f64().unwrap();
    assert!((lambda1 - (1.0 - std::f64::consts::SQRT_2)).abs() < 1e-11);
}

#[test]
fn verify_flags_falsification_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), "p.json", FALSIFYING_INSTANCE);
    let out = deltaspec(&["verify", "--problem", &problem, "--check", "theorem1", "--tol", "1e-13"]);
    assert_eq!(out.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdicts"]["theorem1"], "falsified");
    assert_eq!(report["falsified"], true);
    assert_eq!(report["unexpected_regime"], true);
    assert!((report["lambda1"].as_f64().unwrap() - 5.5).abs() < 1e-9);
    assert!((report["threshold"].as_f64().unwrap() - 3.95).abs() < 1e-12);
}

#[test]
fn verify_neumann_check_on_robin_problem_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = NEUMANN_FREE.replace(r#""ha": 0"#, r#""ha": 1"#);
    let problem = write_problem(dir.path(), "p.json", &text);
    let out = deltaspec(&["verify", "--problem", &problem, "--check", "corollary2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Neumann"), "{err}");
}

#[test]
fn grid_dumps_realized_points() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
      "timescale": [
        {"type": "interval", "from": 0, "to": 1},
        {"type": "point", "at": 1.5}, {"type": "point", "at": 2}
      ],
      "potential": [
        {"kind": "const", "value": 0}, {"kind": "const", "value": 0},
        {"kind": "const", "value": 0}
      ],
      "ha": 0, "hb": 0
    }"#;
    let problem = write_problem(dir.path(), "p.json", text);
    let out = deltaspec(&["grid", "--problem", &problem, "--step", "0.5"]);
    assert!(out.status.success());
    let grid: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(grid["points"], serde_json::json!([0.0, 0.5, 1.0, 1.5, 2.0]));
    assert_eq!(grid["origin"][1], "sampled");
    assert_eq!(grid["origin"][2], "original");
    assert_eq!(grid["rho_b"], 1.5);
}

#[test]
fn load_errors_name_the_violated_assumption() {
    let dir = tempfile::tempdir().unwrap();

    let text = NEUMANN_FREE.replace(r#""ha": 0"#, r#""ha": -1"#);
    let problem = write_problem(dir.path(), "bad1.json", &text);
    let out = deltaspec(&["solve", "--problem", &problem]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular Robin"));

    let text = r#"{"timescale":[{"type":"point","at":0},{"type":"point","at":1}],
                   "potential":[{"kind":"const","value":0},{"kind":"const","value":0}],
                   "ha":0,"hb":0}"#;
    let problem = write_problem(dir.path(), "bad2.json", text);
    let out = deltaspec(&["solve", "--problem", &problem]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));

    let out = deltaspec(&["solve", "--problem", "/nonexistent/p.json"]);
    assert_eq!(out.status.code(), Some(1));

    let out = deltaspec(&["frobnicate"]);
    assert_ne!(out.status.code(), Some(0));
}
