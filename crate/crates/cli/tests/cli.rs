use std::process::{Command, Output};

fn sr_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sr-lab")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    sr_lab(args).status.code().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["cm", "--input", "builtin:rp2_6", "--prime", "2"]), 1);
    assert_eq!(code(&["cm", "--input", "builtin:rp2_6", "--prime", "3"]), 0);
    assert_eq!(code(&["pd", "--input", "builtin:boundary_simplex_3"]), 0);
    assert_eq!(code(&["lefschetz", "--mode", "strong", "--input", "builtin:torus7"]), 3);
    assert_eq!(code(&["lefschetz", "--mode", "almost", "--input", "builtin:torus7"]), 0);
    assert_eq!(code(&["dehn-sommerville", "--input", "builtin:torus7"]), 1);
    assert_eq!(code(&["fvec", "--input", "builtin:nonsense"]), 2);
    assert_eq!(code(&["fvec", "--input", "builtin:torus7", "--prime", "91"]), 2);
    assert_eq!(code(&["fvec"]), 2);
}

#[test]
fn input_files() {
    let dir = std::env::temp_dir().join(format!("sr-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"vertices":["a","b"],"facets":[["a","b"]],"gamma_facets":[["a","c"]]}"#).unwrap();
    let out = sr_lab(&["fvec", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let broken = dir.join("broken.json");
    std::fs::write(&broken, "{\"vertices\": [\"a\"],\n \"facets\": 3}").unwrap();
    let out = sr_lab(&["fvec", "--input", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"), "{}", String::from_utf8_lossy(&out.stderr));
    let point = dir.join("empty.json");
    std::fs::write(&point, r#"{"vertices":["a"],"facets":[]}"#).unwrap();
    let out = sr_lab(&["fvec", "--input", point.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["tables"][0]["rows"][0][1], serde_json::json!([1]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_output_is_reproducible() {
    let args = ["pou", "--input", "builtin:rp2_6", "--prime", "2", "--seed", "5", "--format", "json"];
    let a = sr_lab(&args);
    let b = sr_lab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["prime"], 2);
    assert_eq!(r["seeds"], serde_json::json!([5, 6, 7]));
    assert_eq!(r["input_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn subdivision_inputs() {
    assert_eq!(code(&["subdiv-check", "--input", "builtin:barycentric(simplex(3))"]), 0);
    assert_eq!(code(&["lefschetz", "--mode", "subdivision", "--input", "builtin:barycentric(simplex(2))"]), 0);
    assert_eq!(code(&["subdiv-check", "--input", "builtin:simplex(3)"]), 2);
}

#[test]
fn text_tables_have_fixed_columns() {
    let out = sr_lab(&["fvec", "--input", "builtin:torus7"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\nf     (1,7,21,14)\nh     (1,4,10,-1)\n"), "{text}");
    assert!(text.contains("verdict: holds"));
}
