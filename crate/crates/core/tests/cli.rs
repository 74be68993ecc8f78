//! End-to-end checks of the `tonelab` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn tonelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tonelab")).args(args).env_remove("TONELAB_OUT_DIR").output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn digests(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), Sha256::digest(fs::read(&p).unwrap()).to_vec())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn hemisphere_model_report() {
    let o = tonelab(&["model", "--c", "1", "--dim", "2", "--radius", "1.5707963", "--tol", "1e-8"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["check"], "model_ball");
    assert_eq!(r["verdict"], "PASS");
    let l = r["margin"].as_f64().unwrap();
    assert!((l - 2.0).abs() < 1e-6, "{l}");
    assert_eq!(r["config"]["c"], 1.0);
    assert_eq!(r["config"]["dim"], 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS"));
}

#[test]
fn mu_passes_with_min_margin_line() {
    let o = tonelab(&["mu", "--c", "0", "--m", "2", "--radius", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["verdict"], "PASS");
    assert!(String::from_utf8_lossy(&o.stderr).contains("min margin"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tonelab(&["model", "--bogus"]).status.code(), Some(2));
    assert_eq!(tonelab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(tonelab(&["model", "--radius", "abc"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain_file");
    fs::write(&file, "x").unwrap();
    let target = file.join("sub");
    let o = tonelab(&["model", "--grid", "512", "--out", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identical_runs_produce_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = ["cheng", "--c", "-1", "--trials", "12", "--grid", "256", "--seed", "42", "--out", out];
    assert_eq!(tonelab(&args).status.code(), Some(0));
    let first = digests(dir.path());
    assert!(first.iter().any(|(n, _)| n == "index.csv") && first.iter().any(|(n, _)| n == "cheng.json"));
    for (name, _) in &first {
        fs::remove_file(dir.path().join(name)).unwrap();
    }
    assert_eq!(tonelab(&args).status.code(), Some(0));
    assert_eq!(digests(dir.path()), first);
}

#[test]
fn corpus_csv_has_one_row_per_warp() {
    let dir = tempfile::tempdir().unwrap();
    let o = tonelab(&[
        "cheng",
        "--c",
        "0",
        "--trials",
        "50",
        "--grid",
        "256",
        "--seed",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(dir.path().join("cheng_corpus.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["seed", "c", "margin", "verdict"]);
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| &r[1] == "0" && &r[3] == "PASS"));
    let index = fs::read_to_string(dir.path().join("index.csv")).unwrap();
    assert!(index.lines().nth(1).unwrap().contains("cheng.json"));
}

#[test]
fn failed_check_reports_fail_and_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = tonelab(&["elliptic", "solve", "--F", "10", "--grid", "64", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["verdict"], "FAIL");
    let saved: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("elliptic_solve.json")).unwrap()).unwrap();
    assert_eq!(saved["verdict"], "FAIL");
}

#[test]
fn gate_reports_certificate_without_failing() {
    let o = tonelab(&["elliptic", "gate", "--F", "10", "--grid", "64"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["detail"]["gate"], "no_solution_certificate");
}

#[test]
fn env_var_overrides_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let (env_dir, flag_dir) = (dir.path().join("env"), dir.path().join("flag"));
    let o = Command::new(env!("CARGO_BIN_EXE_tonelab"))
        .args(["model", "--grid", "512", "--out", flag_dir.to_str().unwrap()])
        .env("TONELAB_OUT_DIR", &env_dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(env_dir.join("model_ball.json").exists());
    assert!(!flag_dir.exists());
}

#[test]
fn problem_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("problem.json");
    fs::write(
        &problem,
        r#"{"domain": {"kind": "polar", "c": 0.0, "r": 1.0, "N": 48, "n_theta": 8}, "F": 2.0, "psi": 0.0}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = tonelab(&["elliptic", "solve", "--problem", problem.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert_eq!(r["verdict"], "PASS");
    assert!(r["detail"]["solution"]["residual"].as_f64().unwrap() < 1e-4);
    let mut rdr = csv::Reader::from_path(out.join("elliptic_solve_field.csv")).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "u") && headers.iter().any(|h| h == "f"));
    assert_eq!(rdr.records().count(), 1 + 48 * 8);
}

#[test]
fn csv_format_prints_table() {
    let o = tonelab(&["cheng", "--trials", "5", "--grid", "256", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("seed,c,margin,verdict"));
    assert_eq!(text.lines().count(), 6);
}
