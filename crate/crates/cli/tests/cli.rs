use std::process::Command;

use serde_json::Value;

use ffperiods::special::carlitz_period;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ffperiods"))
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let out = bin().args(args).arg("--json").output().unwrap();
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn pitilde_report_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let status = bin().args(["pitilde", "--q", "2", "--prec", "120", "--out"]).arg(&path).output().unwrap().status;
    assert!(status.success());
    let a: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(a["command"], "pitilde");
    assert_eq!(a["pass"], true);
    assert_eq!(a["config"]["canonical_root"], "least-dlog-leading-coefficient");
    assert!(!a["config"]["moduli"].as_array().unwrap().is_empty());
    let (code, b) = run_json(&["pitilde", "--q", "2", "--prec", "120", "--threads", "2"]);
    assert_eq!(code, 0);
    assert_eq!(without_timing(a), without_timing(b));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["pitilde", "--prec"]), 2);
    assert_eq!(code(&["cm", "validate", "--example", "cubic-f2"]), 5);
    assert_eq!(code(&["cm", "validate", "--example", "kummer-t:3"]), 0);
    assert_eq!(code(&["periods", "--example", "kummer"]), 2);
}

#[test]
fn cm_rank_from_model_file() {
    let model = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/kummer-t-3.json");
    let (code, v) = run_json(&["cm", "rank", "--model", model]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["lattice_rank"], 2);
    assert_eq!(v["payload"]["agree"], true);
}

#[test]
fn shtuka_build_emits_motive_fixture() {
    let (code, v) = run_json(&["shtuka", "build", "--example", "kummer-t:3", "--prec", "30"]);
    assert_eq!(code, 0);
    let p = &v["payload"];
    assert_eq!(p["motive"]["rank"], 2);
    assert_eq!(p["xi"]["xi1"], 1);
    assert_eq!(p["tmodule"]["r"], 2);
    let (code, v) = run_json(&["shtuka", "check", "--example", "kummer-t:5", "--xi", "2*xi1 + xi3"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
}

#[test]
fn relhunt_from_values_file() {
    let dir = tempfile::tempdir().unwrap();
    let pi = carlitz_period(3, 60).unwrap();
    let vals = vec![pi.to_json(), pi.mul_theta_pow(1).to_json()];
    let path = dir.path().join("vals.json");
    std::fs::write(&path, serde_json::to_string(&vals).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let (code, v) = run_json(&["relhunt", "--values", p, "--height", "4", "--margin", "5"]);
    assert_eq!(code, 0);
    let rel = &v["certificates"][0];
    assert_eq!(rel["scope"], "within bounds");
    assert_eq!(rel["bounds"]["height"], 4);
    assert!(rel["residual_val"].is_array());

    let single = dir.path().join("pi.json");
    std::fs::write(&single, serde_json::to_string(&serde_json::json!({ "values": [pi.to_json()] })).unwrap()).unwrap();
    let s = single.to_str().unwrap();
    let out = bin().args(["relhunt", "--values", s, "--deg", "2", "--height", "8", "--margin", "5", "--require-pass"]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stdout).contains("NONE within bounds"));
    let out = bin().args(["relhunt", "--values", s, "--deg", "4", "--height", "40"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn legendre_carlitz_tensor() {
    let (code, v) = run_json(&[
        "legendre", "--example", "carlitz-tensor:2", "--prec", "100", "--deg", "2", "--height", "10", "--margin", "10",
        "--require-pass",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["legendre"]["fibers"][0]["certificate"]["kind"], "algebraic");
    assert_eq!(v["config"]["fixture"], "carlitz-tensor:2");
}

#[test]
fn quasi_periods_and_agf() {
    let (code, v) = run_json(&["qp", "--example", "kummer-t:3", "--prec", "60"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["matrix"].as_array().unwrap().len(), 2);
    assert!(v["payload"]["det_val"].is_string());
    let (code, v) = run_json(&["agf", "--example", "carlitz", "--prec", "40", "--trunc", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["agf"]["T"], 8);
}

#[test]
fn relhunt_reads_reported_values() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = run_json(&["pitilde", "--prec", "80"]);
    assert_eq!(code, 0);
    let p = r["payload"]["pitilde"].clone();
    assert!(p["text"].is_string());
    let path = dir.path().join("v.json");
    std::fs::write(&path, serde_json::to_string(&serde_json::json!({ "values": [p.clone(), p] })).unwrap()).unwrap();
    let (code, v) = run_json(&["relhunt", "--values", path.to_str().unwrap(), "--height", "2", "--margin", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert_eq!(v["certificates"].as_array().unwrap().len(), 1);
}
