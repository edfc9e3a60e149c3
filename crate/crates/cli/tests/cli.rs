use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn spinstab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinstab")).args(args).current_dir(dir).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    std::fs::write(dir.join(name), text).unwrap();
    name.to_string()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn out_of_range_cutoff_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let out = spinstab(&["verify", "torus", "--cutoff", "99"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cutoff"));
}

#[test]
fn unknown_suite_and_bad_config_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(spinstab(&["verify", "torii"], dir.path()).status.code(), Some(2));
    let cfg = write(dir.path(), "cfg.json", r#"{"seed": 3, "colour": "blue"}"#);
    assert_eq!(spinstab(&["verify", "clifford", "--config", &cfg], dir.path()).status.code(), Some(2));
    assert_eq!(spinstab(&["verify", "clifford", "--config", "missing.json"], dir.path()).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_spinstab"))
        .args(["verify", "clifford"])
        .env("SPINSTAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn g2_suite_passes_with_report() {
    let dir = TempDir::new().unwrap();
    let out = spinstab(&["verify", "g2", "--seed", "7", "--out", "g2.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("g2.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 7);
    assert_eq!(report["pass"], true);
    let records = report["records"].as_array().unwrap();
    assert!(records.iter().all(|r| !r["anchor"].as_str().unwrap().is_empty()));
    let exact: Vec<_> = records
        .iter()
        .filter(|r| r["comparison"] == "equal" && r["id"].as_str().unwrap().starts_with("identities"))
        .collect();
    assert_eq!(exact.len(), 4);
    assert!(exact.iter().all(|r| r["value"] == 0.0));
}

#[test]
fn config_file_is_echoed_and_flags_override() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"seed": 3, "tolerance_scale": 2.0}"#);
    let out = spinstab(&["verify", "clifford", "--config", &cfg, "--seed", "11", "--out", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["seed"], 11);
    assert_eq!(report["config"]["tolerance_scale"], 2.0);
}

#[test]
fn sphere_build_emits_tail_mass() {
    let dir = TempDir::new().unwrap();
    let d = write(dir.path(), "sphere.json", r#"{"fiber":{"shape":{"kind":"sphere","rho0":1.0,"rho1":0.999}}}"#);
    let out = spinstab(&["warped", "build", &d, "--out", "build.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let s: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("build.json")).unwrap()).unwrap();
    let (r1, a0, mass) = (s["r1"].as_f64().unwrap(), s["a0"].as_f64().unwrap(), s["mass"].as_f64().unwrap());
    assert_eq!(mass, -r1.powi(3) * a0 / 168.0);
    assert!(String::from_utf8_lossy(&out.stderr).contains(&format!("r1 = {r1}")));
}

#[test]
fn product_scan_reproduces_fiber_curvature() {
    let dir = TempDir::new().unwrap();
    let d = write(
        dir.path(),
        "product.json",
        r#"{"fiber":{"shape":{"kind":"sphere","rho0":1.0,"rho1":0.9}},"mass":{"kind":"zero"},"schedule":{"kind":"constant","s":0.3}}"#,
    );
    let out = spinstab(&["warped", "scan", &d, "--out", "scan.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    assert!(text.starts_with("r,q_index,s_tilde,lower_bound\n"));
    // Round sphere of radius 0.97: S = 2 / 0.97².
    let expected = 2.0 / (0.97f64 * 0.97);
    let rows = csv_rows(&text);
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| (num(&r[2]) - expected).abs() <= 1e-12));
}

#[test]
fn schwarzschild_oracle_within_tolerance() {
    let dir = TempDir::new().unwrap();
    let d = write(
        dir.path(),
        "schw.json",
        r#"{"fiber":{"shape":{"kind":"flat_torus","dim":2,"scale0":1.0,"scale1":1.0}},"mass":{"kind":"constant","m0":0.5}}"#,
    );
    let out = spinstab(&["warped", "oracle", &d, "--out", "oracle.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&std::fs::read_to_string(dir.path().join("oracle.csv")).unwrap());
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| num(&r[5]) <= 1e-6 && num(&r[2]) == 0.0));
}

#[test]
fn malformed_descriptor_exit_2() {
    let dir = TempDir::new().unwrap();
    let d = write(dir.path(), "bad.json", r#"{"fiber":{"shape":{"kind":"hyperbolic"}}}"#);
    assert_eq!(spinstab(&["warped", "build", &d], dir.path()).status.code(), Some(2));
}

#[test]
fn flat_spectrum() {
    let dir = TempDir::new().unwrap();
    let d = write(dir.path(), "flat.json", r#"{"n":4,"cutoff":2}"#);
    let out = spinstab(&["spectrum", &d, "5"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 6);
    assert_eq!((rows[0][0].as_str(), num(&rows[0][2]), rows[0][3].as_str()), ("lichnerowicz", 0.0, "9"));
    assert_eq!(num(&rows[1][2]), 1.0);
    assert_eq!(rows[5][0], "lambda");
    assert!(num(&rows[5][2]).abs() <= 1e-12);
}

#[test]
fn perturbed_spectrum_reports_residual() {
    let dir = TempDir::new().unwrap();
    // 0.04 cos(x + z) (e1e2 + e2e1) − 0.03 cos(x + z) e3e3, split over ±k.
    let c = r#"[[[0,0],[0.02,0],[0,0]],[[0.02,0],[0,0],[0,0]],[[0,0],[0,0],[-0.015,0]]]"#;
    let desc = format!(
        r#"{{"n":3,"cutoff":1,"perturbation":{{"kind":"sym_tensor","n":3,"cutoff":1,"coeffs":{{"1,0,1":{c},"-1,0,-1":{c}}}}}}}"#
    );
    let d = write(dir.path(), "pert.json", &desc);
    let out = spinstab(&["spectrum", &d, "2"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let lambda = rows.iter().find(|r| r[0] == "lambda").unwrap();
    assert!(num(&lambda[2]) < 0.0);
    assert!(num(&lambda[4]) <= 1e-8);
}

#[test]
fn empty_spectrum_is_header_only() {
    let dir = TempDir::new().unwrap();
    let d = write(dir.path(), "flat.json", r#"{"n":4,"cutoff":2}"#);
    let out = spinstab(&["spectrum", &d, "0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "kind,index,value,multiplicity,residual\n");
}
