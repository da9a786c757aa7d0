use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_coarse-monoid");

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(BIN).args(args).output().unwrap();
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc)
}

#[test]
fn dist_between_words() {
    let (code, doc) = run(&["dist", "ε", "ab", "--monoid", &fixture("free2"), "--horizon", "8"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["distance"]["text"], "2");
    assert_eq!(doc["result"]["distance"]["value"]["kind"], "exact");
}

#[test]
fn dist_between_edge_points() {
    let (code, doc) = run(&["dist", "e:ε:a:1/3", "v:a", "--monoid", &fixture("free1")]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["distance"]["text"], "2/3");
    let (_, doc) = run(&["dist", "a", "ε", "--monoid", &fixture("free1")]);
    assert_eq!(doc["result"]["distance"]["value"]["kind"], "infinite");
}

#[test]
fn strong_ball_cells() {
    let (code, doc) = run(&["ball", "ε", "1", "strong", "--monoid", &fixture("free1")]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["vertices"], serde_json::json!(["ε"]));
    assert_eq!(doc["result"]["cells"], serde_json::json!(["v:ε", "s:ε:a:0:1"]));
    let (code, _) = run(&["ball", "ε", "1", "sideways", "--monoid", &fixture("free1")]);
    assert_eq!(code, 2);
}

#[test]
fn svarc_milnor_on_free_rank_one() {
    let (code, doc) = run(&["svarc-milnor", "--monoid", &fixture("free1"), "-R", "1", "--horizon", "8"]);
    assert_eq!(code, 0);
    let r = &doc["result"];
    assert_eq!(r["S"], serde_json::json!(["ε", "a"]));
    assert_eq!((r["r"].as_str(), r["l"].as_str(), r["lambda"].as_str()), (Some("1/2"), Some("1/4"), Some("1")));
    let a3 = r["factorizations"].as_array().unwrap().iter().find(|f| f["element"] == "aaa").unwrap();
    assert_eq!(a3["bound"], 13);
}

#[test]
fn svarc_milnor_rejects_zero_monoid() {
    let (code, doc) = run(&["svarc-milnor", "--monoid", &fixture("zero"), "--horizon", "6"]);
    assert_eq!(code, 1);
    assert_eq!(doc["result"]["hypothesis_failed"], "isometric_embedding");
    assert!(!doc["result"]["report"]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn quasimetric_exit_codes() {
    let (code, doc) = run(&["check", "quasimetric", "--monoid", &fixture("free1"), "--lambda", "4", "--mu", "4"]);
    assert_eq!(code, 1);
    let w = &doc["result"]["quasi_metric"]["witnesses"][0];
    assert_eq!(w["lhs"]["kind"], "infinite");
    let (code, _) = run(&["check", "quasimetric", "--monoid", &fixture("z3"), "--lambda", "2", "--mu", "0"]);
    assert_eq!(code, 0);
}

#[test]
fn edge_midpoints_of_cyclic_group_need_larger_constants() {
    // d(e, (g², g, 1/2)) = 5/2 while the reverse distance is 1/2
    let z3 = fixture("z3");
    let (code, doc) =
        run(&["check", "quasimetric", "--space", "gamma", "--monoid", &z3, "--lambda", "2", "--mu", "0", "--sample", "3"]);
    assert_eq!(code, 1);
    let w = &doc["result"]["quasi_metric"]["witnesses"][0];
    assert_eq!((w["lhs"]["num"].as_u64(), w["lhs"]["den"].as_u64()), (Some(5), Some(2)));
    let (code, _) =
        run(&["check", "quasimetric", "--space", "gamma", "--monoid", &z3, "--lambda", "5", "--mu", "0", "--sample", "3"]);
    assert_eq!(code, 0);
}

#[test]
fn algebraic_checks() {
    let (code, doc) = run(&["check", "cancellative", "--monoid", &fixture("bicyclic"), "--horizon", "4"]);
    assert_eq!(code, 1);
    assert_eq!(doc["result"]["status"], "fails");
    let (code, _) = run(&["check", "cancellative", "--side", "right", "--monoid", &fixture("free2"), "--horizon", "4"]);
    assert_eq!(code, 0);
    let (code, doc) = run(&["check", "fgt", "--monoid", &fixture("zero"), "--horizon", "6", "--threshold", "5"]);
    assert_eq!(code, 1);
    let roles: Vec<&str> = doc["result"]["witnesses"][0]["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["role"].as_str().unwrap())
        .collect();
    assert_eq!(&roles[..2], ["b", "c"]);
    let (code, _) =
        run(&["check", "unitary", "--monoid", &fixture("f1z2"), "--submonoid", "ends-in-identity", "--horizon", "5"]);
    assert_eq!(code, 0);
    let (code, doc) = run(&["check", "unitary", "--monoid", &fixture("free1"), "--generators", "aa,aaa"]);
    assert_eq!(code, 1);
    assert_eq!(doc["result"]["witnesses"][0]["law"], "s ∈ M, t ∉ M, s·t ∈ M");
}

#[test]
fn submonoid_and_free_product_pipelines() {
    let f1z2 = fixture("f1z2");
    let (code, doc) =
        run(&["submonoid", "--monoid", &f1z2, "--submonoid", "ends-in-identity", "--units", "ε,g", "--horizon", "6"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["radius_m"], "2");
    assert_eq!(doc["result"]["pipeline"]["S"], serde_json::json!(["ε", "f", "gf"]));
    let (code, doc) = run(&["free-product", "--monoid", &f1z2, "--horizon", "6"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["basis_size"], 2);
    assert_eq!(doc["result"]["submonoid"]["realized"]["lambda"], "2");
    let (code, doc) =
        run(&["submonoid", "--monoid", &fixture("free1"), "--submonoid", "whole", "--units", "a", "--horizon", "4"]);
    assert_eq!(code, 1);
    assert_eq!(doc["result"]["hypothesis_failed"], "right_units");
}

#[test]
fn bad_monoid_documents_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"type\":\"unknown\"}").unwrap();
    let (code, doc) = run(&["dist", "ε", "ε", "--monoid", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(doc["error"].as_str().unwrap().contains("parse error at line 1"));
    let not_group = dir.path().join("table.json");
    std::fs::write(&not_group, r#"{"type":"finite_group","elements":["e","z"],"table":[[0,1],[1,1]]}"#).unwrap();
    let (code, doc) = run(&["dist", "e", "z", "--monoid", not_group.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(doc["error"].as_str().unwrap().contains("validation error"));
    let (code, _) = run(&["dist", "ε", "ε"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn horizon_too_small_is_an_error() {
    let (code, doc) = run(&["check", "axioms", "--monoid", &fixture("bicyclic"), "--horizon", "3", "--sample", "3"]);
    assert_eq!(code, 2);
    assert!(doc["error"].as_str().unwrap().contains("horizon too small"));
}

#[test]
fn json_output_and_echo() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args =
        ["check", "qi", "--monoid", &fixture("z3"), "--seed", "7", "--json", path.to_str().unwrap()];
    let out = Command::new(BIN).args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["input"]["seed"], 7);
    assert_eq!(doc["input"]["horizon"], 8);
    assert!(doc.get("duration_ms").is_none());
    let (_, timed) = run(&["check", "qi", "--monoid", &fixture("z3"), "--timing"]);
    assert!(timed["duration_ms"].is_u64());
}
