use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn thermoshift(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_thermoshift"));
    cmd.args(args).env_remove("THERMOSHIFT_CACHE");
    if let Some(c) = cache {
        cmd.env("THERMOSHIFT_CACHE", c);
    }
    cmd.output().expect("binary runs")
}

fn envelope(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(thermoshift(&["--help"], None).status.code(), Some(0));
    assert_eq!(thermoshift(&["--version"], None).status.code(), Some(0));
    assert_eq!(thermoshift(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(thermoshift(&["classify", "--k", "two"], None).status.code(), Some(1));
}

#[test]
fn input_errors_exit_2_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let o = out_dir.to_str().unwrap();
    let missing = thermoshift(&["classify", "--shift", "full2", "--out", o], None);
    assert_eq!(missing.status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"transition\": [[1, 1],\n  [1 1]]\n}").unwrap();
    let parse = thermoshift(&["orbits", "--shift", bad.to_str().unwrap(), "--out", o], None);
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 3"));
    assert!(!out_dir.exists());
}

#[test]
fn classify_vertex_case() {
    let e = envelope(&thermoshift(&["classify", "--shift", "full2", "--k", "2", "--potential", "a1-1"], None));
    assert_eq!(e["command"], "classify");
    assert_eq!(e["schema_version"], 1);
    assert_eq!(e["payload"]["case"], "VertexPeriodic");
    assert_eq!(e["payload"]["fingerprint"]["segments"], serde_json::json!(["0"]));
}

#[test]
fn payload_is_deterministic() {
    let args = ["rotset", "--potential", "exB3"];
    let a = envelope(&thermoshift(&args, None));
    let b = envelope(&thermoshift(&args, None));
    assert_eq!(a["payload"].to_string(), b["payload"].to_string());
    assert_eq!(a["input_hash"], b["input_hash"]);
}

#[test]
fn ztsweep_limit_masses() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().to_str().unwrap();
    let out = thermoshift(&["ztsweep", "--potential", "ex2c-1", "--out", o], None);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("ztsweep.csv")).unwrap();
    let last: Vec<f64> = csv.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    for (m, want) in last[3..6].iter().zip([0.5, 0.25, 0.25]) {
        assert!((m - want).abs() < 1e-4, "{csv}");
    }
    assert!(dir.path().join("ztsweep.json").exists());
    assert!(dir.path().join("ztsweep_thermo.csv").exists());
}

#[test]
fn spec_file_with_cli_override() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, r#"{"shift": "full3", "k": 1}"#).unwrap();
    let s = spec.to_str().unwrap();
    let a = envelope(&thermoshift(&["orbits", "--spec", s], None));
    assert_eq!(a["payload"]["count"], 8);
    let b = envelope(&thermoshift(&["orbits", "--spec", s, "--k", "2"], None));
    assert_eq!(b["payload"]["count"], 148);
}

#[test]
fn cache_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["orbits", "--shift", "full3", "--k", "2"];
    let a = envelope(&thermoshift(&args, Some(dir.path())));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let b = envelope(&thermoshift(&args, Some(dir.path())));
    assert_eq!(a["payload"].to_string(), b["payload"].to_string());
    let c = envelope(&thermoshift(&["orbits", "--shift", "full3", "--k", "2", "--no-cache"], Some(dir.path())));
    assert_eq!(a["payload"].to_string(), c["payload"].to_string());
}

#[test]
fn facecurve_and_cohom() {
    let e = envelope(&thermoshift(&["facecurve", "--potential", "exB3", "--alpha", "0,-1", "--samples", "101"], None));
    assert_eq!(e["payload"]["kinks"]["kinks"].as_array().unwrap().len(), 1);
    let c = envelope(&thermoshift(&["cohom", "--potential", "a1-4"], None));
    assert_eq!(c["payload"]["cohomologous"], true);
    let d = envelope(&thermoshift(&["cohom", "--potential", "a1-1", "--against", "a1-2"], None));
    assert_eq!(d["payload"]["cohomologous"], false);
    assert_eq!(d["payload"]["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn float_mode_warning() {
    let p = r#"{"k":1,"m":1,"values":{"0":["0.25"],"1":["0"]}}"#;
    let out = thermoshift(&["classify", "--shift", "full2", "--potential", p], None);
    let e = envelope(&out);
    assert!(e["warnings"].as_array().unwrap().iter().any(|w| w.as_str().unwrap().contains("float mode")));
}

#[test]
fn b1_face_limit_splits_evenly() {
    let e = envelope(&thermoshift(&["classify", "--potential", "exB1", "--alpha", "0,-1"], None));
    assert_eq!(e["payload"]["case"], "MultiComponent");
    let coef = e["payload"]["coefficients"]["values"].as_array().unwrap();
    assert_eq!(coef.len(), 2);
    assert!(coef.iter().all(|c| c["exact"] == "1/2"));
}
