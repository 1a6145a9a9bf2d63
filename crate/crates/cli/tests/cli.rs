use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sunada-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).expect("valid JSON");
    (out.status.code().unwrap(), v)
}

#[test]
fn sunada_verify_passes_and_has_report_schema() {
    let (code, v) = json(&["sunada-verify"]);
    assert_eq!(code, 0);
    for key in ["claim_id", "description", "status", "witness", "runtime_ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["status"], "pass");
    assert_eq!(v["runtime_ms"], 0);
}

#[test]
fn corrupted_subgroup_fails_with_violations() {
    let (code, v) = json(&["sunada-verify", "--corrupt"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
    assert!(!v["witness"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn cycle_table_passes() {
    let out = run(&["cycle-table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(2,2,1,1,1)"));
    assert!(text.contains("(4,2,1)"));
}

#[test]
fn theorem1_rows() {
    let (code, v) = json(&["theorem1"]);
    // the genus-one order-2 row has no valid certificate
    assert_eq!(code, 1);
    let rows = v["witness"]["rows"].as_array().unwrap();
    let get = |id: &str| rows.iter().find(|r| r["row"] == id).unwrap();
    for (id, genus, ends) in [
        ("a", 0, 8),
        ("b", 0, 15),
        ("c1", 1, 5),
        ("c2", 2, 3),
        ("d1", 1, 13),
        ("d3", 3, 3),
    ] {
        let r = get(id);
        assert_eq!(r["status"], "pass", "{id}");
        assert_eq!(r["cover"]["genus"], genus);
        assert_eq!(r["cover"]["ends"], ends);
    }
    assert_eq!(get("d2")["status"], "fail");
}

#[test]
fn smooth_convention_changes_ends_only() {
    let (_, v) = json(&["theorem1", "--ends-convention", "smooth"]);
    let rows = v["witness"]["rows"].as_array().unwrap();
    let a = rows.iter().find(|r| r["row"] == "a").unwrap();
    assert_eq!(a["cover"]["genus"], 0);
    assert_eq!(a["cover"]["ends"], 4);
}

#[test]
fn transplant_presets() {
    for preset in ["triangle", "classes"] {
        let (code, v) = json(&["transplant", "--gens", preset]);
        assert_eq!(code, 0, "{preset}");
        assert_eq!(v["witness"]["certificate"]["schema_version"], 1);
    }
}

#[test]
fn seeded_random_transplant_is_reproducible() {
    let a = run(&["transplant", "--gens", "random", "--seed", "7", "--json"]);
    let b = run(&["transplant", "--gens", "random", "--seed", "7", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_inputs_exit_2() {
    let out = run(&["transplant", "--coeff-bound", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["theorem2", "--p", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["theorem2", "--p", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p must differ from 2 or 7"));
    let out = run(&["sunada-verify", "--max-group-size", "100"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn theorem2_default() {
    let (code, v) = json(&["theorem2"]);
    assert_eq!(code, 0);
    let w = &v["witness"];
    assert_eq!(w["p"], 23);
    assert_eq!(w["nonconjugacy"]["scanned"], 6072);
    assert!(w["nonconjugacy"]["witness"].is_null());
    assert_eq!(w["triple"]["order"], 2_040_192);
    assert_eq!(w["triple"]["index"], 1771);
    assert_eq!(w["triple"]["sunada"], true);
    assert_eq!(w["triple"]["torsion_free"], true);
    assert_eq!(w["K_generators"].as_array().unwrap().len(), 3);
    assert_eq!(w["tau_K_generators"].as_array().unwrap().len(), 3);
}

#[test]
fn timing_flag_only_adds_runtime() {
    let (_, v) = json(&["cycle-table", "--timing"]);
    assert!(v["runtime_ms"].as_u64().unwrap() >= 1);
}
