use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn axial(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_axial"));
    cmd.args(args).env_remove("AXIAL_FORMAT").stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(o)))
}

fn emit(dir: &Path, name: &str, extra: &[&str]) -> String {
    let path = dir.join(format!("{name}.alg"));
    let path = path.to_str().unwrap().to_string();
    let mut args = vec!["zoo", "emit", name, "-o", &path];
    args.extend_from_slice(extra);
    let out = axial(&args, None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn decompose_reports_parts_and_input_digest() {
    let dir = tempfile::tempdir().unwrap();
    let file = emit(dir.path(), "2a", &[]);
    let out = axial(&["--format", "json", "decompose", &file, "--axis", "eA"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let text = std::fs::read(&file).unwrap();
    assert_eq!(v["input_sha256"], format!("{:x}", Sha256::digest(&text)));
    assert_eq!(v["status"], "pass");
    assert_eq!(v["command"][0], "--format");
    let parts = v["result"]["parts"].as_array().unwrap();
    let eig: Vec<&str> = parts.iter().map(|p| p["eigenvalue"].as_str().unwrap()).collect();
    assert_eq!(eig, ["1", "0", "1/4"]);
    assert_eq!(v["result"]["complete"], true);
}

#[test]
fn format_can_come_from_the_environment() {
    let file = axial(&["zoo", "emit", "bplus"], None);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_axial"));
    let out = cmd
        .args(["martindale", "-"])
        .env("AXIAL_FORMAT", "json")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(&file.stdout)?;
            c.wait_with_output()
        })
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["all_hold"], true);
    assert_eq!(v["result"]["conditions"].as_array().unwrap().len(), 3);
}

#[test]
fn failing_check_exits_one_and_errors_exit_two() {
    let two_a = stdout(&axial(&["zoo", "emit", "2a"], None));
    let out = axial(&["fusion-check", "--axis", "eA", "--law", "assoc"], Some(&two_a));
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("outside"), "{}", stdout(&out));

    let out = axial(&["decompose", "--axis", "eA"], Some("field Q\ndim 2\nbasis a\n"));
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let out = axial(&["--format", "json", "decompose", "--axis", "nope"], Some(&two_a));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "error");

    assert_eq!(axial(&["no-such-command"], None).status.code(), Some(2));
}

#[test]
fn search_finds_the_zero_algebra_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = emit(dir.path(), "zero", &["--field", "5"]);
    let out = axial(&["--format", "json", "search", &file, "--target", "nonadditive-iso"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["result"];
    assert_eq!(r["status"], "witness-found");
    assert_eq!(r["counts"]["multiplicative"], 24);
    assert_eq!(r["counts"]["additive"], 4);
    assert_eq!(r["witness"]["pair"], serde_json::json!(["z1", "2 z1"]));

    // the reported map feeds back into residual-check, which then fails
    let map = dir.path().join("witness.map");
    std::fs::write(&map, r["witness"]["map"].as_str().unwrap()).unwrap();
    let out = axial(&["residual-check", &file, "--map", map.to_str().unwrap(), "--class", "iso"], None);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn residual_check_accepts_additive_maps() {
    let dir = tempfile::tempdir().unwrap();
    let file = emit(dir.path(), "2a", &["--field", "7"]);
    let map = dir.path().join("swap.map");
    std::fs::write(&map, "linmap 3 3\n1 0 0\n0 0 1\n0 1 0\n").unwrap();
    let out = axial(
        &["--format", "json", "residual-check", &file, "--map", map.to_str().unwrap(), "--class", "iso"],
        None,
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let r = &json(&out)["result"];
    assert_eq!(r["identity"]["holds"], true);
    assert_eq!(r["residual"]["vanishes"], true);
}

#[test]
fn highwater_marker_needs_a_window() {
    let marker = stdout(&axial(&["zoo", "emit", "highwater"], None));
    assert!(marker.starts_with("lazy highwater"));
    assert_eq!(axial(&["martindale"], Some(&marker)).status.code(), Some(2));
    let out = axial(&["martindale", "--window", "3"], Some(&marker));
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn zoo_list_names_every_entry() {
    let out = stdout(&axial(&["zoo", "list"], None));
    for name in ["2a", "bplus", "matsuo-line", "matsuo-s4", "zero", "diag2", "highwater"] {
        assert!(out.contains(name), "{name} missing from {out}");
    }
}
