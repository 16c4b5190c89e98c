use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epi-mackey")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn constant(ring: &Value, u: u64, v: u64, w: u64) -> i64 {
    ring["structure_constants"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["u"] == serde_json::json!([u]) && e["v"] == serde_json::json!([v]) && e["w"] == serde_json::json!([w]))
        .map_or(0, |e| e["c"].as_i64().unwrap())
}

#[test]
fn ring_of_degree_one_is_the_integers() {
    let ring = json(&["ring", "--d", "1", "--r", "1"]);
    assert_eq!(ring["basis"], serde_json::json!([[1]]));
    assert_eq!(constant(&ring, 1, 1, 1), 1);
}

#[test]
fn square_of_the_two_element_set_in_degree_four() {
    let ring = json(&["ring", "--d", "4"]);
    assert_eq!(constant(&ring, 2, 2, 2), 2);
    assert_eq!(constant(&ring, 2, 2, 3), 4);
    assert_eq!(constant(&ring, 2, 2, 4), 1);
    assert_eq!(ring["marks"][3], serde_json::json!([1, 14, 36, 24]));
}

#[test]
fn segal_table_for_three() {
    let report = json(&["segal", "--p", "3"]);
    assert_eq!(report["pass"], true);
    let with_p: Vec<u64> = report["rows"].as_array().unwrap().iter().map(|r| r["with_p"].as_u64().unwrap()).collect();
    assert_eq!(with_p, vec![3, 1, 3]);
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(run(&["hom", "--source", "2,x", "--target", "1"]).status.code(), Some(2));
    assert_eq!(run(&["ring", "--d", "9"]).status.code(), Some(2));
    assert_eq!(run(&["cube-check", "--sub", "sideways"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "csv", "mackey-check", "--input", "/nonexistent"]).status.code(), Some(2));
}

#[test]
fn json_output_is_deterministic() {
    for args in [&["--format", "json", "ring", "--d", "5", "--r", "2"][..], &["--format", "json", "cube-check", "--seed", "7", "--show-diagram"]] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
    let par = run(&["--format", "json", "marks", "--d", "5", "--r", "2"]);
    let seq = run(&["--format", "json", "--sequential", "marks", "--d", "5", "--r", "2"]);
    assert_eq!(par.stdout, seq.stdout);
}

#[test]
fn cube_check_reads_what_it_shows() {
    let shown = json(&["cube-check", "--d", "3", "--r", "2", "--seed", "4", "--show-diagram", "--oracle"]);
    let path = std::env::temp_dir().join(format!("epi-mackey-cube-{}.json", std::process::id()));
    std::fs::write(&path, shown["diagram"].to_string()).unwrap();
    let again = json(&["cube-check", "--input", path.to_str().unwrap(), "--oracle"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(shown["extended"], again["extended"]);
    assert_eq!(again["extended"], again["oracle"]);
}

#[test]
fn mackey_check_accepts_a_representable() {
    let m = json(&["mackey-representable", "--d", "3", "--r", "1", "--at", "2"]);
    let path = std::env::temp_dir().join(format!("epi-mackey-functor-{}.json", std::process::id()));
    std::fs::write(&path, m["functor"].to_string()).unwrap();
    let report = json(&["mackey-check", "--input", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn verify_all_passes_in_degree_four() {
    let out = run(&["--format", "csv", "verify-all", "--d", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 13);
    assert!(!text.contains("FAIL"));
}

#[test]
fn csv_tables() {
    let out = run(&["--format", "csv", "surj-table", "--max", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "k,1,2,3\n1,1,0,0\n2,1,2,0\n3,1,6,6\n");
}
