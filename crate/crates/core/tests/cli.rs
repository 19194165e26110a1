use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn b2check(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_b2check")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn cusp_report_is_verified_and_stable() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "cusp.json", r#"{"XXX": 1, "YY": 1}"#);
    let (j1, j2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let out = b2check(&["analyze", "--poly", s(&poly), "--max-degree", "20", "--json", s(&j1)]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("verdict: ISOMORPHISM_VERIFIED"));
    let again = b2check(&["analyze", "--poly", s(&poly), "--max-degree", "20", "--json", s(&j2)]);
    assert_eq!(out.stdout, again.stdout);
    let (a, b) = (std::fs::read(&j1).unwrap(), std::fs::read(&j2).unwrap());
    assert_eq!(a, b);

    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["verdict"], "ISOMORPHISM_VERIFIED");
    assert_eq!(v["problem"]["weights"], serde_json::json!([2, 3]));
    let mut t5_t7 = vec![0; 21];
    t5_t7[5] = 1;
    t5_t7[7] = 1;
    let want = serde_json::json!(t5_t7);
    for key in ["bruteforce_hp", "bound_series", "closed_form"] {
        assert_eq!(v["series"][key], want, "{key}");
    }
    assert_eq!(v["degrees"][4]["dim_B2"], 1);
    assert_eq!(v["degrees"].as_array().unwrap().len(), 20);
    assert!(v["relmat"].as_array().unwrap().iter().all(|c| c["verdict"] == true));
}

#[test]
fn problem_file_and_flag_overrides() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.json", r#"{"P": {"XX": 1, "YY": -1}, "max_degree": 5, "checks": ["bruteforce", "phi"], "seed": 3}"#);
    let json = dir.path().join("r.json");
    let out = b2check(&["analyze", "--poly", s(&spec), "--json", s(&json)]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(v["problem"]["max_degree"], 5);
    assert_eq!(v["problem"]["seed"], 3);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);

    let out = b2check(&["analyze", "--poly", s(&spec), "--max-degree", "4", "--checks", "series", "--json", s(&json)]);
    // without brute force and phi there is no verdict
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(v["verdict"], "INCOMPLETE");
    assert_eq!(v["problem"]["max_degree"], 4);
}

#[test]
fn subcommands() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "p.json", r#"{"XYX": 1, "YYY": 1}"#);
    for (cmd, marker) in [
        ("hilbert", "series"),
        ("bruteforce", "bruteforce"),
        ("matrix", "relmat"),
        ("lemmas", "lemmas"),
        ("forms", "forms"),
    ] {
        let out = b2check(&[cmd, "--poly", s(&poly), "--max-degree", "7", "--samples", "20"]);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", stdout(&out));
        assert!(stdout(&out).lines().any(|l| l.starts_with(marker) && l.contains("PASS")), "{cmd}");
    }
    let out = b2check(&["matrix", "--poly", s(&poly), "--max-degree", "7", "--degree", "7"]);
    let text = stdout(&out);
    assert!(text.contains("m = 7: UV01 BothZero"));
    assert!(text.contains("A (8x6):") && text.contains("B (8x6):"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (r#"{"XXY": 1}"#, 2, "not square-free"),
        (r#"{"XY": 1, "YX": -1}"#, 2, "abelianization is zero"),
        (r#"{"XY": 1, "X": 1}"#, 2, "not quasihomogeneous"),
        ("{}", 2, "zero polynomial"),
        (r#"{"": 2}"#, 2, "constant polynomial"),
        ("not json", 1, "parse error"),
        (r#"{"XZ": 1}"#, 1, "parse error"),
    ];
    for (i, (body, code, msg)) in cases.iter().enumerate() {
        let p = write(&dir, &format!("{i}.json"), body);
        let out = b2check(&["analyze", "--poly", s(&p)]);
        assert_eq!(out.status.code(), Some(*code), "{body}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(msg), "{body}: {err}");
    }
    let p = write(&dir, "ok.json", r#"{"XXX": 1, "YY": 1}"#);
    assert_eq!(b2check(&["analyze", "--poly", s(&p), "--weights", "2,4"]).status.code(), Some(1));
    assert_eq!(b2check(&["analyze", "--poly", s(&p), "--weights", "1,1"]).status.code(), Some(2));
    assert_eq!(b2check(&["analyze", "--poly", s(&p), "--weights", "x"]).status.code(), Some(1));
    assert_eq!(b2check(&["analyze", "--poly", "/nonexistent/p.json"]).status.code(), Some(1));
    assert_eq!(b2check(&["analyze"]).status.code(), Some(1));
    assert_eq!(b2check(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(b2check(&["--help"]).status.code(), Some(0));
}
