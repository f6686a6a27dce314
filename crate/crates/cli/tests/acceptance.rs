//! Runs every acceptance criterion at its tolerance and time limit.

use std::process::Command;

use srlab::acceptance::{run_all, CriterionResult};

#[test]
fn acceptance_suite() {
    let results: Vec<CriterionResult> = run_all();
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn criterion_1_through_the_binary() {
    let out = Command::new(env!("CARGO_BIN_EXE_sr-lab"))
        .args(["schenzel", "--input", "builtin:torus7", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], "holds");
    let tables = report["tables"].as_array().unwrap();
    let h = tables[0]["rows"].as_array().unwrap().iter().find(|r| r[0] == "h").unwrap();
    assert_eq!(h[1], serde_json::json!([1, 4, 10, -1]));
    let dims: Vec<u64> = tables[1]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r[0] == 0 && r[1].as_u64().unwrap() < 4)
        .map(|r| r[2].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [1, 4, 10, 1]);
}
