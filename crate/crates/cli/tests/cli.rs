//! End-to-end tests of the binary: output formats, exit-code contract,
//! cache file lifecycle, and report determinism across worker counts.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stirling-padic"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn compute_values() {
    let out = run(&["compute", "stirling", "--n", "10", "--k", "5"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "269325");

    let out = run(&["compute", "mstirling", "--m", "5", "--n", "5", "--k", "1"]);
    assert_eq!(stdout_of(&out).trim(), "11274");

    let out = run(&["compute", "bernoulli", "--n", "12"]);
    assert_eq!(stdout_of(&out).trim(), "-691/2730");

    let out = run(&["compute", "harmonic", "--n", "6", "--r", "2"]);
    assert_eq!(stdout_of(&out).trim(), "5369/3600");

    let out = run(&["compute", "elemsym", "--n", "3", "--k", "2"]);
    assert_eq!(stdout_of(&out).trim(), "1");

    let out = run(&["compute", "valuation", "--n", "125", "--k", "122", "--p", "5"]);
    assert_eq!(stdout_of(&out).trim(), "6");

    let out = run(&["compute", "valuation", "--n", "10", "--k", "0", "--p", "5"]);
    assert_eq!(stdout_of(&out).trim(), "inf");

    let out = run(&["compute", "regular", "--p", "37"]);
    assert_eq!(stdout_of(&out).trim(), "irregular [32]");

    let out = run(&["compute", "regular", "--p", "11"]);
    assert_eq!(stdout_of(&out).trim(), "regular");
}

#[test]
fn exit_code_contract() {
    // 2: parameter / usage errors
    assert_eq!(run(&["verify", "theorem1", "--p", "4"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "valuation", "--n", "5", "--k", "1", "--p", "9"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "theorem1", "--p", "5", "--a", "7..9"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "even-step", "--p", "5"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "theorem1", "--p", "5", "--bogus"]).status.code(), Some(2));

    // 3: resource limits
    assert_eq!(run(&["compute", "stirling", "--n", "2001", "--k", "1"]).status.code(), Some(3));
    assert_eq!(run(&["compute", "valuation", "--n", "20000", "--k", "3", "--p", "5"]).status.code(), Some(3));
    assert_eq!(run(&["compute", "bernoulli", "--n", "2002"]).status.code(), Some(3));

    // 0: clean verification
    assert_eq!(run(&["verify", "prow", "--p", "5..13"]).status.code(), Some(0));
}

#[test]
fn verify_report_shape_and_round_trip() {
    let out = run(&["verify", "theorem1", "--p", "5", "--a", "1..4"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["summary"]["fail"], 0);
    assert_eq!(doc["summary"]["pass"], 54); // rows 5,10,15,20: 6+11+16+21
    assert_eq!(doc["tool_version"], env!("CARGO_PKG_VERSION"));
    assert!(doc.get("truncated").is_none());

    // records sorted by (check_id, p, a, n, m, k)
    let records = doc["records"].as_array().unwrap();
    let keys: Vec<(String, i64, i64)> = records
        .iter()
        .map(|r| {
            (
                r["check_id"].as_str().unwrap().to_string(),
                r["params"]["a"].as_i64().unwrap(),
                r["params"]["k"].as_i64().unwrap(),
            )
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);

    // k = ap rows carry the infinite valuation as the string "inf"
    let inf_cells = records
        .iter()
        .filter(|r| r["actual"] == serde_json::json!("inf"))
        .count();
    assert_eq!(inf_cells, 4);
}

#[test]
fn report_deterministic_across_jobs() {
    let a = run(&["verify", "boyd", "--p", "13", "--nmax", "8", "--jobs", "1"]);
    let b = run(&["verify", "boyd", "--p", "13", "--nmax", "8", "--jobs", "4"]);
    let mut da = json_of(&a);
    let mut db = json_of(&b);
    da["wall_time_ms"] = 0.into();
    db["wall_time_ms"] = 0.into();
    assert_eq!(da, db);
}

#[test]
fn csv_output() {
    let out = run(&["verify", "prow", "--p", "7", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "check_id,p,a,n,m,k,predicted,actual,status"
    );
    // rows: 3 boundary + 4 bound + 5 vanish + 1 wilson
    assert_eq!(lines.clone().count(), 13);
    assert!(lines.all(|l| l.ends_with(",pass")));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = bin()
        .args(["verify", "prow", "--p", "5", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout_of(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["summary"]["fail"], 0);
}

#[test]
fn sweep_exit_codes_and_truncation() {
    // evidence rows never fail the run by default
    let out = run(&["sweep", "--p", "5", "--a", "1", "--n", "2", "--m", "1", "--conj", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert!(doc["summary"]["fail"].as_u64().unwrap() >= 1); // verbatim reading flagged

    // unless asked to count them
    let out = run(&[
        "sweep", "--p", "5", "--a", "1", "--n", "2", "--m", "1", "--conj", "3",
        "--strict-conjectures",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // rows beyond the engine limit truncate the report and exit 3
    let out = run(&["sweep", "--p", "5", "--a", "1", "--n", "6", "--conj", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let doc = json_of(&out);
    assert_eq!(doc["truncated"], true);

    // p = 3 settled case: full agreement
    let out = run(&["sweep", "--p", "3", "--a", "1..2", "--n", "1..3", "--conj", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["summary"]["fail"], 0);
}

#[test]
fn verify_all_suite() {
    let out = run(&["verify", "all", "--p", "5..7", "--a", "max"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["summary"]["fail"], 0);
    let ids: std::collections::BTreeSet<&str> = doc["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["check_id"].as_str().unwrap())
        .collect();
    for expected in [
        "theorem1",
        "theorem2",
        "boyd_scaling",
        "boyd_shift",
        "washington_odd",
        "washington_even",
        "harmonic_power_bound",
        "symmetric_power_odd",
        "symmetric_bernoulli_even",
        "prow_bound",
        "prow_vanish",
        "wilson",
        "shifted_odd_valuation",
        "shifted_even_congruence",
        "corollary13",
    ] {
        assert!(ids.contains(expected), "missing {expected} in {ids:?}");
    }
}

#[test]
fn cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bern.jsonl");
    let path_str = path.to_str().unwrap();

    let out = run(&["cache", "build", "--max", "200", "--cache", path_str]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("101 records"));
    let first = std::fs::read(&path).unwrap();
    assert!(String::from_utf8_lossy(&first).starts_with("{\"format\":\"bernoulli-cache\",\"version\":1}"));

    // idempotent
    let out = run(&["cache", "build", "--max", "200", "--cache", path_str]);
    assert!(out.status.success());
    assert_eq!(first, std::fs::read(&path).unwrap());

    let out = run(&["cache", "inspect", "--cache", path_str]);
    assert!(out.status.success());
    let line = stdout_of(&out);
    assert!(line.contains("101 records"));
    assert!(line.contains("max index 200"));
    assert!(line.contains("sha256 "));

    // a consumer can read through the cache
    let out = run(&["compute", "bernoulli", "--n", "12", "--cache", path_str]);
    assert_eq!(stdout_of(&out).trim(), "-691/2730");

    // corruption is caught with the line number
    let text = std::fs::read_to_string(&path).unwrap();
    let corrupted = text.replace(
        "{\"n\":4,\"num\":\"-1\",\"den\":\"30\"}",
        "{\"n\":4,\"num\":\"-1\",\"den\":\"31\"}",
    );
    assert_ne!(text, corrupted);
    std::fs::write(&path, corrupted).unwrap();
    let out = run(&["cache", "inspect", "--cache", path_str]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    // clear removes the file
    std::fs::write(&path, text).unwrap();
    let out = run(&["cache", "clear", "--cache", path_str]);
    assert!(out.status.success());
    assert!(!path.exists());
}

#[test]
fn cache_env_var_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let env_path = dir.path().join("env.jsonl");
    let flag_path = dir.path().join("flag.jsonl");

    let out = bin()
        .args(["cache", "build", "--max", "20"])
        .env("STIRLING_PADIC_CACHE", &env_path)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(env_path.exists());

    // the explicit flag wins over the environment variable
    let out = bin()
        .args(["cache", "build", "--max", "20", "--cache"])
        .arg(&flag_path)
        .env("STIRLING_PADIC_CACHE", &env_path)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(flag_path.exists());
    assert!(!Path::new("bernoulli.cache.jsonl").exists());
}
