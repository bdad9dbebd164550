use std::process::{Command, Output};

use serde_json::Value;

fn stablab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stablab")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn job_file(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("stablab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn hilb_roots_as_json() {
    let out = stablab(&["--json", "roots", "--family", "hilb", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v.get("conventions").is_some());
    let text = v.to_string();
    for r in ["-3", "-2", "-1", "1", "2", "3"] {
        assert!(text.contains(r), "{text}");
    }
}

#[test]
fn stab_entries() {
    let out = stablab(&["--json", "stab", "--family", "tgr", "--k", "1", "--n", "2", "--chamber", "+"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["entries"], serde_json::json!([["hbar - a1 + a2", "0"], ["hbar", "a1 - a2"]]));
}

#[test]
fn passing_and_failing_certificates() {
    let ok = stablab(&["--json", "yb-check", "--family", "tgr", "--n", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["status"], "pass");
    let bad = stablab(&["--json", "groupoid-check", "--family", "tgr-union", "--n", "3", "--walls", "hopping"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["status"], "fail");
}

#[test]
fn usage_and_input_errors_exit_two() {
    for args in [
        vec!["stab", "--family", "tgr", "--k", "1", "--n", "2", "--chamber", "1,1"],
        vec!["stab", "--family", "nope", "--k", "1", "--n", "2", "--chamber", "+"],
        vec!["heisenberg-check", "--N", "3", "--identities", "nonsense"],
        vec!["roots", "--family", "hilb", "--n", "3", "--chamber", "+"],
        vec!["bogus"],
    ] {
        let out = stablab(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn job_files() {
    let good = job_file("good.job", "# comment\ncommand = roots\nfamily = hilb\nn = 2\n");
    assert_eq!(stablab(&["run", &good]).status.code(), Some(0));
    let unknown = job_file("unknown.job", "command = roots\nfamily = hilb\ncolour = red\n");
    let out = stablab(&["run", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("colour") && err.contains('3'), "{err}");
    let missing = job_file("missing.job", "command = stab\nfamily = tgr\n");
    assert_eq!(stablab(&["run", &missing]).status.code(), Some(2));
    assert_eq!(stablab(&["run", "/nonexistent/job"]).status.code(), Some(2));
}

#[test]
fn output_file_and_threads() {
    let path = job_file("out.json", "");
    let out = Command::new(env!("CARGO_BIN_EXE_stablab"))
        .env("STABLAB_THREADS", "2")
        .args(["--json", "--output", &path, "fixed-points", "--family", "tgr", "--k", "1", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v.get("conventions").is_some());
    let bad = Command::new(env!("CARGO_BIN_EXE_stablab"))
        .env("STABLAB_THREADS", "zero")
        .args(["roots", "--family", "hilb", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
