use std::path::Path;

use slimlat::cli::{run, EXIT_ENV, EXIT_FAIL, EXIT_OK};
use slimlat::io::lattice_to_json;
use slimlat::lattice::standard::n5;
use slimlat::slim::grid;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["slimlat"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let n5 = write(tmp.path(), "n5.json", &lattice_to_json(&n5(), None));
    assert_eq!(call(&["check", &n5, "--slim"]).0, EXIT_OK);
    assert_eq!(call(&["check", &n5, "--semimodular"]).0, EXIT_FAIL);
    let (g, layout) = grid(2, 3).unwrap();
    let g = write(tmp.path(), "g.json", &lattice_to_json(&g, Some(&layout)));
    assert_eq!(call(&["check", &g, "--slim", "--semimodular", "--c1"]).0, EXIT_OK);
    let bad = write(tmp.path(), "bad.json", "{\"elements\": [");
    assert_eq!(call(&["check", &bad, "--slim"]).0, EXIT_ENV);
    let missing = tmp.path().join("absent.json");
    assert_eq!(call(&["check", missing.to_str().unwrap(), "--slim"]).0, EXIT_ENV);
    let cyclic = write(tmp.path(), "c.json", r#"{"elements":["a","b"],"covers":[["a","b"],["b","a"]]}"#);
    assert_ne!(call(&["check", &cyclic, "--slim"]).0, EXIT_OK);
}

#[test]
fn gen_writes_one_file_per_lattice() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("gen");
    let (code, stdout, _) = call(&["gen", "--max-size", "6", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let files = std::fs::read_dir(&out).unwrap().count();
    assert_eq!(files, 1 + 1 + 1 + 2 + 3 + 5);
    assert_eq!(stdout.lines().count(), files);
    for line in stdout.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let body = std::fs::read_to_string(out.join(v["file"].as_str().unwrap())).unwrap();
        let (l, layout) = slimlat::io::lattice_from_json(&body).unwrap();
        assert_eq!(l.len() as u64, v["elements"].as_u64().unwrap());
        assert!(layout.is_some());
    }
}

#[test]
fn verify_outcomes() {
    assert_eq!(call(&["verify", "--theorem", "--max-size", "8"]).0, EXIT_OK);
    assert_eq!(call(&["verify", "--pattern", "P81", "--max-size", "8"]).0, EXIT_OK);
    let (code, stdout, _) = call(&["verify", "--pattern", "P82", "--max-size", "9"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(stdout.contains("witness"));
    assert_eq!(call(&["verify", "--pattern", "no-such-pattern", "--max-size", "5"]).0, EXIT_ENV);
}

#[test]
fn render_and_retracts() {
    let (code, svg, _) = call(&["render", "--pattern", "P81"]);
    assert_eq!(code, EXIT_OK);
    assert!(svg.starts_with("<svg"));
    let (code, tikz, _) = call(&["render", "--pattern", "P92", "--format", "tikz"]);
    assert_eq!(code, EXIT_OK);
    assert!(tikz.contains("\\begin{tikzpicture}"));

    let tmp = tempfile::tempdir().unwrap();
    let b = write(tmp.path(), "b2.json", &lattice_to_json(&slimlat::lattice::standard::b2(), None));
    let (code, stdout, _) = call(&["retracts", &b]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.lines().count() >= 11);
    let (code, _, _) = call(&["absorption", &b, "--pattern", "P81"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn oracle_enum_counts() {
    let (code, stdout, _) = call(&["oracle-enum", "--max-size", "6"]);
    assert_eq!(code, EXIT_OK);
    let last: serde_json::Value = serde_json::from_str(stdout.lines().last().unwrap()).unwrap();
    assert_eq!(last["counts"], serde_json::json!([1, 1, 1, 2, 5, 15]));
    assert_eq!(call(&["oracle-enum", "--max-size", "30"]).0, EXIT_FAIL);
}
