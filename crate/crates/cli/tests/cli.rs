use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_parshin"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/ex54.json")
}

#[test]
fn verify_worked_corpus() {
    let out = run(&["verify", "--json", "--input", corpus().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let insts = v["instances"].as_array().unwrap();
    assert_eq!(insts.len(), 21);
    for i in insts {
        assert_eq!(i["surface"]["refined_product"], "1");
        assert_eq!(i["surface"]["parshin_product"], "1");
    }
}

#[test]
fn written_corpus_matches_shipped() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let out = run(&["example54", "--write-corpus", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let a: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let b: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(corpus()).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn fuzz_batch_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["fuzz", "--count", "500", "--seed", "7", "--dump-dir", dir.path().to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("500/500 pass"), "{text}");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn fuzz_is_deterministic_across_modes() {
    let a = run(&["fuzz", "--count", "40", "--seed", "3", "--json", "--mode", "sequential"]);
    let b = run(&["fuzz", "--count", "40", "--seed", "3", "--json", "--mode", "parallel"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reports_are_byte_identical() {
    let input = corpus();
    let args = ["log", "--json", "--input", input.to_str().unwrap()];
    let a = run(&args);
    let b = run(&args);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_rational_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"model":"curve","f":{"constant":"1","factors":[]},"g":{"constant":"3/0","factors":[]}}"#,
    )
    .unwrap();
    let out = run(&["tate", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("g.constant"), "{err}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none.json");
    assert_eq!(run(&["tate", "--input", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["fuzz", "--epsilon", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["tate", "--input", corpus().to_str().unwrap()]).status.code(), Some(2));

    let curve = dir.path().join("curve.json");
    std::fs::write(
        &curve,
        r#"{"model":"curve","f":{"constant":"2","factors":[["0",1],["1",-1]]},"g":{"constant":"-1","factors":[["3",2]]}}"#,
    )
    .unwrap();
    let out = run(&["tate", "--input", curve.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["log", "--input", curve.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
