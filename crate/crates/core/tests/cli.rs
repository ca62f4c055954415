use std::process::{Command, Output};

use serde_json::Value;

fn weylring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weylring")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = weylring(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn coords(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()
}

#[test]
fn tensor_json_schema_and_order() {
    let v = json(&["tensor", "--type", "E6", "--left", "1,0,0,0,0,1", "--right", "2,0,0,0,0,2"]);
    assert_eq!(v["system"]["series"], "E");
    assert_eq!(v["system"]["rank"], 6);
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 29);
    let weights: Vec<Vec<i64>> = comps.iter().map(|c| coords(&c["weight"])).collect();
    let mut sorted = weights.clone();
    sorted.sort();
    assert_eq!(weights, sorted);
    let total: i64 = comps.iter().map(|c| c["mult"].as_i64().unwrap()).sum();
    assert_eq!(total, 38);
}

#[test]
fn oracle_flag_agrees() {
    let a = json(&["tensor", "--type", "D5", "--left", "0,0,0,1,0", "--right", "1,0,0,0,1"]);
    let b = json(&["tensor", "--type", "D5", "--left", "0,0,0,1,0", "--right", "1,0,0,0,1", "--oracle"]);
    assert_eq!(a, b);
}

#[test]
fn output_is_deterministic() {
    let args = ["kspectrum", "--module", "E7_pi2", "--max-level", "5", "--format", "json"];
    assert_eq!(weylring(&args).stdout, weylring(&args).stdout);
}

#[test]
fn dim_and_dominant() {
    assert_eq!(json(&["dim", "--type", "D8", "--weight", "0,0,0,0,0,0,0,1"])["dimension"], 128);
    let v = json(&["dominant", "--type", "A2", "--weight", "-1,2"]);
    assert_eq!(coords(&v["dominant"]), vec![1, 1]);
    assert_eq!(v["sign"], -1);
}

#[test]
fn roots_count() {
    let v = json(&["roots", "--type", "E7"]);
    assert_eq!(v["positive_roots"].as_array().unwrap().len(), 63);
    assert_eq!(coords(&v["rho"]), vec![1; 7]);
}

#[test]
fn weights_of_minuscule() {
    let v = json(&["weights", "--type", "E6", "--weight", "1,0,0,0,0,0"]);
    let ws = v["weights"].as_array().unwrap();
    assert_eq!(ws.len(), 27);
    assert!(ws.iter().all(|w| w["mult"] == 1));
}

#[test]
fn rule_closed_form_matches_tensor() {
    let rule = json(&["rule", "--id", "e6-100001", "--params", "a=2,f=2"]);
    let tensor = json(&["tensor", "--type", "E6", "--left", "1,0,0,0,0,1", "--right", "2,0,0,0,0,2"]);
    assert_eq!(rule["components"], tensor["components"]);
    assert_eq!(rule["rule"], "e6-100001");
}

#[test]
fn kspectrum_series_schema() {
    let v = json(&["kspectrum", "--module", "E6_wallach", "--max-level", "3"]);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 4);
    for (b, l) in levels.iter().enumerate() {
        let b = b as i64;
        assert_eq!(l["level"], b);
        assert_eq!(l["central"], -12 - 3 * b);
        let ks = l["ktypes"].as_array().unwrap();
        assert_eq!(ks.len(), 1);
        assert_eq!(coords(&ks[0]["ss"]), vec![0, b, 0, 0, 0]);
        assert_eq!(ks[0]["mult"], 1);
    }
    let closed = json(&["kspectrum", "--module", "E6_wallach", "--max-level", "3", "--closed-form"]);
    assert_eq!(closed["levels"], v["levels"]);
}

#[test]
fn verma_character() {
    let v = json(&["kspectrum", "--pair", "EVII", "--verma", "0,0,0,0,0,0,0", "--max-level", "2"]);
    let level1 = v["levels"][1]["ktypes"].as_array().unwrap();
    assert_eq!(level1.len(), 1);
    assert_eq!(coords(&level1[0]["ss"]), vec![0, 0, 0, 0, 0, 1]);
    assert_eq!(level1[0]["central"], -29);
}

#[test]
fn schmid_levels() {
    let v = json(&["schmid", "--pair", "EVII", "--max-level", "3"]);
    let l3 = v["levels"][3]["ktypes"].as_array().unwrap();
    assert_eq!(l3.len(), 3);
}

#[test]
fn report_json_buckets() {
    let v = json(&["report", "--module", "E7_pi1", "--max-level", "4", "--group", "2,3,4,5"]);
    assert_eq!(v["delta_n"], 27);
    let top = &v["levels"][0]["buckets"][0];
    assert_eq!(coords(&top["key"]), vec![0, 0, 0, 0]);
    assert_eq!(top["cancels"], false);
}

#[test]
fn verify_suites_pass() {
    let out = weylring(&["verify", "--suite", "spectra", "--max-level", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS spectrum")).count(), 4);
    let out = weylring(&["verify", "--suite", "rules", "--rule", "d5-spin-plus"]);
    assert!(out.status.success());
}

#[test]
fn broken_rule_file_reports_line() {
    let src = weylring::branchrules::BUILTIN_RULES.replacen("\"[-1,1,0,0,0]\"", "\"[-1,0,1,0,0]\"", 1);
    assert_ne!(src, weylring::branchrules::BUILTIN_RULES);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rules.toml");
    std::fs::write(&path, &src).unwrap();
    let line = src.lines().position(|l| l.contains("[-1,0,1,0,0]")).unwrap() + 1;
    let out = weylring(&["verify", "--suite", "rules", "--rule", "d5-vector", "--rules", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL rule d5-vector"), "{text}");
    assert!(text.contains(&format!("rules.toml:{line}")), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(weylring(&["dim", "--type", "E6", "--weight", "1,2"]).status.code(), Some(2));
    assert_eq!(weylring(&["rule", "--id", "nope"]).status.code(), Some(2));
    assert_eq!(weylring(&["frobnicate"]).status.code(), Some(2));
    let guard = weylring(&["tensor", "--type", "E7", "--left", "1,1,1,1,1,1,1", "--right", "1,1,1,1,1,1,1"]);
    assert_eq!(guard.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&guard.stderr).contains("exceeds the limit"));
}
