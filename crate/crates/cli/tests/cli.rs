use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_d0res"));
    c.env_remove("D0RES_MAX_TRUNCATION");
    c
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    (status.code().unwrap(), String::from_utf8(stdout).unwrap(), String::from_utf8(stderr).unwrap())
}

#[test]
fn analyze_cusp_json_and_text() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "cusp.json", r#"{"curve":{"implicit":{"poly":[[[0,2],"1"],[[3,0],"-1"]]}},"ranks":[2]}"#);
    let (code, out, _) = run(bin().arg("analyze").arg(&f).args(["--rank", "2", "--rank", "3"]));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["germ"]["r0"], 2);
    assert_eq!(v["certificates"].as_array().unwrap().len(), 2);
    assert_eq!(v["warnings"], serde_json::json!([]));
    let (code, out, _) = run(bin().arg("analyze").arg(&f).args(["--format", "text", "--strict"]));
    assert_eq!(code, 0);
    assert!(out.contains("r0 = 2"));
}

#[test]
fn empty_curve_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", r#"{"curve":{}}"#);
    let (code, _, err) = run(bin().arg("analyze").arg(&f));
    assert_eq!(code, 2);
    assert!(err.contains("curve"), "{err}");
    let f = write(dir.path(), "bad2.json", r#"{"curve":{"implicit":{"poly":[[[0,2],"one"]]}}}"#);
    let (code, _, err) = run(bin().arg("analyze").arg(&f));
    assert_eq!(code, 2);
    assert!(err.contains("curve.implicit.poly[0]"), "{err}");
}

#[test]
fn strict_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tac.json", r#"{"curve":{"implicit":{"poly":[[[0,2],"1"],[[4,0],"-1"]]}}}"#);
    let (code, out, _) = run(bin().arg("analyze").arg(&f).args(["--rank", "2"]));
    assert_eq!(code, 0);
    assert!(out.contains("RankBelowCritical") || out.contains("below the critical rank"));
    assert!(out.contains("NotSeparated"));
    let (code, _, _) = run(bin().arg("analyze").arg(&f).args(["--rank", "2", "--strict"]));
    assert_eq!(code, 1);
}

#[test]
fn second_extension_exits_three() {
    // (x^2 + y^2)(x^2 - 2 y^2) needs both i and sqrt 2
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "two.json", r#"{"curve":{"implicit":{"poly":[[[4,0],"1"],[[2,2],"-1"],[[0,4],"-2"]]}}}"#);
    let (code, _, err) = run(bin().arg("analyze").arg(&f));
    assert_eq!(code, 3, "{err}");
}

#[test]
fn truncation_ceiling_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "cusp.json", r#"{"curve":{"implicit":{"poly":[[[0,2],"1"],[[3,0],"-1"]]}}}"#);
    let (code, _, err) = run(bin().arg("analyze").arg(&f).env("D0RES_MAX_TRUNCATION", "zero"));
    assert_eq!(code, 2, "{err}");
    // identical branches never separate, so the ceiling is what stops the doubling
    let f = write(
        dir.path(),
        "dup.json",
        r#"{"curve":{"branches":[{"x":[[1,"1"]],"y":[[2,"1"]]},{"x":[[1,"1"]],"y":[[2,"1"]]}]}}"#,
    );
    let (code, _, err) = run(bin().arg("analyze").arg(&f).env("D0RES_MAX_TRUNCATION", "64"));
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("truncation"), "{err}");
}

#[test]
fn corpus_matches_golden() {
    let (code, out, err) = run(bin().arg("corpus").arg(corpus_dir()));
    assert_eq!(code, 0, "{out}{err}");
    assert_eq!(out.matches("golden ok").count(), 6, "{out}");
    assert!(out.contains("global r0 (lcm over germs) = 6"));
}

#[test]
fn corpus_update_then_compare() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(corpus_dir().join("cusp.json"), dir.path().join("cusp.json")).unwrap();
    let (code, out, _) = run(bin().arg("corpus").arg(dir.path()));
    assert_eq!(code, 1);
    assert!(out.contains("golden missing"));
    let (code, _, _) = run(bin().arg("corpus").arg(dir.path()).arg("--update-golden"));
    assert_eq!(code, 0);
    let golden = dir.path().join("golden/cusp.report.json");
    let first = fs::read(&golden).unwrap();
    let (code, _, _) = run(bin().arg("corpus").arg(dir.path()));
    assert_eq!(code, 0);
    fs::write(&golden, b"{}").unwrap();
    let (code, out, _) = run(bin().arg("corpus").arg(dir.path()));
    assert_eq!(code, 1);
    assert!(out.contains("MISMATCH"));
    run(bin().arg("corpus").arg(dir.path()).arg("--update-golden"));
    assert_eq!(fs::read(&golden).unwrap(), first);
}

#[test]
fn oracle_subcommand() {
    let (code, out, _) = run(bin().arg("oracle").arg(corpus_dir().join("triple_point.json")));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["oracles"]["pass"], true);
    assert_eq!(v["oracles"]["colength"].as_array().unwrap().len(), 3);
    assert_eq!(v["oracles"]["pushforward_restriction"].as_array().unwrap().len(), 12);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let f = corpus_dir().join("e6.json");
    let a = run(bin().arg("analyze").arg(&f)).1;
    let b = run(bin().arg("analyze").arg(&f)).1;
    assert_eq!(a, b);
}
