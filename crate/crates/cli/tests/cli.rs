use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qkwc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkwc"))
        .args(args)
        .output()
        .expect("run qkwc")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn ifun_degree_zero_is_one() {
    let out = qkwc(&["ifun", "--preset", "P1", "--max-degree", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let terms = json(&out)["terms"].as_array().unwrap().clone();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["class"], serde_json::json!([0]));
    assert_eq!(terms[0]["text"], "(1)");
}

#[test]
fn ifun_projective_line_two_degrees() {
    let out = qkwc(&["ifun", "--preset", "P1", "--max-degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let classes: Vec<Value> = v["terms"].as_array().unwrap().iter().map(|t| t["class"].clone()).collect();
    assert_eq!(classes, vec![serde_json::json!([0]), serde_json::json!([1]), serde_json::json!([2])]);
}

#[test]
fn bad_preset_exits_2() {
    let out = qkwc(&["ifun", "--preset", "Q7"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qkwc(&["mu", "--preset", "P1"]);
    assert_eq!(out.status.code(), Some(2), "missing epsilon");
    let out = qkwc(&["verify", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mu_cases() {
    let out = qkwc(&["mu", "--preset", "P2", "--epsilon", "1/4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["terms"].as_array().unwrap().is_empty());
    let out = qkwc(&["mu", "--preset", "toy-P1", "--epsilon", "3"]);
    assert!(json(&out)["terms"].as_array().unwrap().is_empty());
    let out = qkwc(&["mu", "--preset", "toy-P1", "--epsilon", "1/2"]);
    let terms = json(&out)["terms"].as_array().unwrap().clone();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["class"], serde_json::json!([1]));
    assert_eq!(terms[0]["text"], "(-1 - 2*nu)");
}

#[test]
fn transform_untwisted_echoes_input() {
    let pot = configs().join("potential_p1.json");
    let out = qkwc(&["transform", "--preset", "P1", "--epsilon", "1/3", "--potential", pot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let input: Value = serde_json::from_str(&std::fs::read_to_string(&pot).unwrap()).unwrap();
    assert_eq!(json(&out), input);
}

#[test]
fn transform_toy_line_adds_mu_insertions() {
    let cfg = configs().join("toy_p1.toml");
    let out = qkwc(&["transform", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 5);
    let mus = terms
        .iter()
        .filter(|t| t["symbol"]["insertions"].as_array().unwrap().iter().any(|i| i.get("mu").is_some()))
        .count();
    assert_eq!(mus, 3);
    let out = qkwc(&["transform", "--config", cfg.to_str().unwrap(), "--telescope"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["equal"], true);
}

#[test]
fn verify_is_deterministic_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let run = |p: &PathBuf, threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_qkwc"))
            .args(["verify", "--seed", "9", "--trials", "20", "--out", p.to_str().unwrap()])
            .env("QKWC_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(run(&a, "1").status.code(), Some(0));
    assert_eq!(run(&b, "4").status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 6);
}

#[test]
fn loccor_suite_passes() {
    let out = qkwc(&["verify", "loccor", "--trials", "10", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let checks = v["suites"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["failed"] == 0));
}

#[test]
fn injected_split_fault_fails_with_counterexample() {
    let out = qkwc(&["verify", "split", "--inject-fault", "split", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    let rec = &v["suites"][0]["checks"][0];
    assert_eq!(rec["name"], "recombination");
    assert!(rec["counterexample"].as_str().unwrap().starts_with("trial 0"));
}

#[test]
fn json_config_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"preset": "P2", "max_degree": "1"}"#).unwrap();
    let out = qkwc(&["ifun", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["terms"].as_array().unwrap().len(), 2);
    let bad = dir.path().join("run.yaml");
    std::fs::write(&bad, "preset: P2").unwrap();
    assert_eq!(qkwc(&["ifun", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn user_rule_matches_the_twisted_preset() {
    let cfg = configs().join("user_rule.toml");
    let user = qkwc(&["ifun", "--config", cfg.to_str().unwrap()]);
    let preset = qkwc(&["ifun", "--preset", "toy-P1", "--max-degree", "2"]);
    assert_eq!(user.status.code(), Some(0));
    let texts = |v: Value| -> Vec<Value> { v["terms"].as_array().unwrap().iter().map(|t| t["text"].clone()).collect() };
    assert_eq!(texts(json(&user)), texts(json(&preset)));
}
