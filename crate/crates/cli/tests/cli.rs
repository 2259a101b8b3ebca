use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallhouse"))
        .args(args)
        .output()
        .expect("spawn")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json")
}

#[test]
fn height_of_one_plus_z7_plus_z7_cubed() {
    let v = json(&["height", "--level", "7", "--elt", "0:1,1:1,3:1"]);
    assert_eq!(v["height"], "2");
    assert_eq!(v["level"], 7);
}

#[test]
fn weight_finds_three_roots() {
    let v = json(&["weight", "--level", "7", "--elt", "0:1,1:1,3:1"]);
    assert_eq!(v["weight"], 3);
    assert_eq!(v["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn castle_enclosure_brackets_golden_square() {
    // 1 + z5 + z5^4 = golden ratio.
    let v = json(&["castle", "--level", "5", "--elt", "0:1,1:1,4:1"]);
    let approx = v["approx"].as_f64().unwrap();
    assert!((approx - 2.618033988749895).abs() < 1e-12);
}

#[test]
fn negative_coefficients_parse() {
    let v = json(&["cassels-test", "--level", "12", "--elt", "0:1,1:1,11:-1"]);
    assert_eq!(v["cassels_form"], true);
}

#[test]
fn minlevel_drops_redundant_level() {
    let v = json(&["minlevel", "--level", "14", "--elt", "0:1,2:1,6:1"]);
    assert_eq!(v["level"], 7);
}

#[test]
fn hash_is_shared_by_conjugates() {
    let a = json(&["hash", "--level", "7", "--elt", "0:1,1:1,3:1"]);
    let b = json(&["hash", "--level", "7", "--elt", "0:1,3:1,2:1"]);
    assert_eq!(a["coefficients"], b["coefficients"]);
}

#[test]
fn diffset_counterexample_has_no_singleton() {
    let v = json(&["diffset", "--lemma", "singleton", "--p", "7", "--x", "4", "--witness"]);
    assert_eq!(v["holds"], false);
    let profile: Vec<u64> = serde_json::from_value(v["profile"].clone()).unwrap();
    assert!(!profile.contains(&1));
}

#[test]
fn diffset_graph_holds() {
    let v = json(&["diffset", "--lemma", "graph", "--p", "13", "--x", "4"]);
    assert_eq!(v["holds"], true);
}

#[test]
fn splitting_of_two_in_level_31() {
    let v = json(&["splitting", "--level", "31", "--prime", "2", "--castle-exponent", "2"]);
    assert_eq!(v["residue_order"], 5);
    assert_eq!(v["num_primes"], 6);
    assert_eq!(v["t_size"], 3);
    assert_eq!(v["uk_box"]["size"], "27");
}

#[test]
fn exhaust_writes_jsonl() {
    let path = std::env::temp_dir().join(format!("smallhouse-cli-{}.jsonl", std::process::id()));
    let v = json(&["exhaust", "--preset", "l31w6", "--out", path.to_str().unwrap()]);
    assert_eq!(v["survivors"], 5);
    assert!(v["counts"].get("New").is_none());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[..5].iter().all(|r| r["verdict"].as_str().unwrap().starts_with("TableOne")));
    assert_eq!(lines[5]["summary"]["survivors"], 5);
}

#[test]
fn exhaust_output_ignores_job_count() {
    let a = run(&["--json", "exhaust", "--pair", "31,5", "--jobs", "1"]);
    let b = run(&["--json", "exhaust", "--pair", "31,5", "--jobs", "4"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn extended_preset_needs_flag() {
    let out = run(&["exhaust", "--preset", "rw420w7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--extended"));
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(run(&["diffset", "--lemma", "graph", "--p", "12", "--x", "3"]).status.code(), Some(2));
    assert_eq!(run(&["height", "--level", "7", "--elt", "0:x"]).status.code(), Some(2));
}

#[test]
fn verify_tables_passes() {
    for t in ["1", "3", "splitting", "lemmas"] {
        let out = run(&["--json", "verify-tables", "--table", t]);
        assert!(out.status.success(), "table {t}");
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["passed"], true);
    }
}
