use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_chesswit");

const STATE: &str = r#"{"a": 1, "b": "0.3798", "c": "0.3798", "d": 2.6329647182727753,
  "r": [1, 0, 0, 0], "phi": [0, 0, 0, 0]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout_json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn help_matches_golden_file() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/help.txt");
    let help = chesswit_cli::full_help();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&golden, &help).unwrap();
    }
    let expected = fs::read_to_string(&golden).expect("golden help file; regenerate with UPDATE_GOLDEN=1");
    assert_eq!(help, expected);
}

#[test]
fn help_lists_every_flag() {
    let help = chesswit_cli::full_help();
    for flag in [
        "--params",
        "--matrix",
        "--d",
        "--alpha",
        "--beta",
        "--gamma",
        "--n",
        "--seed",
        "--workers",
        "--out",
        "--witness",
        "--psi",
        "--starts",
        "--geometry",
        "--samples",
        "--tol",
    ] {
        assert!(help.contains(&format!("{flag} ")), "{flag} missing from help");
    }
    assert!(help.contains("con:333:221:0:+:psi=0.30"));
}

#[test]
fn ppt_of_params_and_of_written_matrix_agree() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "p.json", STATE);
    let matrix = dir.path().join("m.json");
    let m = matrix.to_str().unwrap();
    assert!(run(&["rho", "--params", &params, "--out", m]).status.success());
    let direct = stdout_json(&["ppt", "--params", &params]);
    let via = stdout_json(&["ppt", "--matrix", m]);
    assert_eq!(direct["ppt"], serde_json::Value::Bool(true));
    assert_eq!(direct["ppt"], via["ppt"]);
    assert_eq!(direct["min_eigs"].as_object().unwrap().len(), 6);
}

#[test]
fn qudit_matrix_needs_matching_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(
        dir.path(),
        "q.json",
        r#"{"dim": 3, "alpha": 0, "beta": 2, "gamma": 1,
            "diag": [[1, 2, "0.5"], [1, 1, 3]],
            "couplings": [{"j": 0, "slot": "ab", "r": 0.7, "phi": 0.2},
                          {"j": 1, "slot": "gg", "r": 0.4, "phi": 1.0}]}"#,
    );
    let m = dir.path().join("m.json");
    let m = m.to_str().unwrap();
    assert!(run(&["rho", "--params", &params, "--out", m]).status.success());
    assert_eq!(stdout_json(&["ppt", "--matrix", m])["ppt"], serde_json::Value::Bool(true));
    assert_eq!(stdout_json(&["ppt", "--matrix", m, "--d", "3"])["ppt"], serde_json::Value::Bool(true));
    assert_eq!(run(&["ppt", "--matrix", m, "--d", "4"]).status.code(), Some(1));
}

#[test]
fn detect_reports_every_family() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "p.json", STATE);
    let v = stdout_json(&["detect", "--params", &params]);
    assert_eq!(v["families"].as_object().unwrap().len(), 8);
    assert_eq!(v["detected_by"]["polygon"], serde_json::Value::Bool(true));
    let min = v["families"]["poly1"]["min"].as_f64().unwrap();
    assert!((min + 0.3371).abs() < 1e-3, "{min}");
    assert!(v["intermediates"]["z"].as_array().unwrap().len() == 3);
}

#[test]
fn compare_reports_the_curve_minimum() {
    let v = stdout_json(&["compare"]);
    let min = v["min_value"].as_f64().unwrap();
    let t = v["argmin"].as_f64().unwrap();
    assert!((min + 0.3371).abs() < 1e-3 && (t - 0.3798).abs() < 1e-3, "{min} at {t}");
    assert_eq!(v["separable_cases_undetected"], serde_json::Value::Bool(true));
}

#[test]
fn scan_is_reproducible_across_runs_and_workers() {
    let a = run(&["scan", "--n", "1000", "--seed", "7", "--workers", "4"]);
    let b = run(&["scan", "--n", "1000", "--seed", "7", "--workers", "4"]);
    let c = run(&["scan", "--n", "1000", "--seed", "7", "--workers", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(a.stdout.iter().filter(|&&b| b == b'\n').count(), 1001);
    let d = run(&["scan", "--n", "1000", "--seed", "8", "--workers", "4"]);
    assert_ne!(a.stdout, d.stdout);
}

#[test]
fn scan_summary_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let sum = dir.path().join("s.json");
    let out = run(&[
        "scan",
        "--n",
        "300",
        "--d",
        "3",
        "--seed",
        "1",
        "--out",
        csv.to_str().unwrap(),
        "--summary",
        sum.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sum).unwrap()).unwrap();
    assert_eq!(v["samples"], 300);
    assert_eq!(v["ppt_valid"], 300);
    assert_eq!(v["dim"], 3);
    assert_eq!(v["detected"]["cylinder"]["count"], 0);
    let rows = fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 301);
    assert!(rows.starts_with("index,dim,alpha,beta,gamma,"));
}

#[test]
fn fr_single_geometry_with_points() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    let v = stdout_json(&["fr", "--geometry", "cone", "--samples", "500", "--csv", pts.to_str().unwrap()]);
    assert_eq!(v["geometry"], "cone");
    assert_eq!(v["violations"], 0);
    assert!(v["boundary_residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(fs::read_to_string(&pts).unwrap().lines().count(), 501);
}

#[test]
fn validate_and_optimality() {
    let v = stdout_json(&["validate-witness", "--witness", "poly2:0110", "--starts", "8"]);
    assert_eq!(v["valid"], serde_json::Value::Bool(true));
    assert!(v["min"].as_f64().unwrap().abs() < 1e-6);
    let v = stdout_json(&["optimality", "--witness", "con:333:122:0:+", "--psi", "0.3"]);
    assert_eq!(v["optimal"], serde_json::Value::Bool(true));
    let v = stdout_json(&["optimality", "--witness", "con:333:122:0:+", "--psi", "0.7853981633974483"]);
    assert_eq!(v["optimal"], serde_json::Value::Bool(false));
    assert!(v["sigma_min"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["detect", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["ppt"]).status.code(), Some(2));
    assert_eq!(run(&["ppt", "--params", "a", "--matrix", "b"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["detect", "--params", "/nonexistent/p.json"]).status.code(), Some(1));
    assert_eq!(run(&["validate-witness", "--witness", "poly3:0000"]).status.code(), Some(1));
    assert_eq!(run(&["validate-witness", "--witness", "sph:300:122:0", "--psi", "1"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad =
        write(dir.path(), "bad.json", r#"{"a": 1, "b": 1, "c": 1, "d": 1, "r": [2, 0, 0, 0], "phi": [0, 0, 0, 0]}"#);
    let out = run(&["detect", "--params", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
    let unknown = write(
        dir.path(),
        "u.json",
        r#"{"a": 1, "b": 1, "c": 1, "d": 1, "r": [0, 0, 0, 0], "phi": [0, 0, 0, 0], "e": 1}"#,
    );
    assert_eq!(run(&["rho", "--params", &unknown]).status.code(), Some(1));
}
