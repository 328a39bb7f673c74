use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ftgate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftgate"))
        .args(args)
        .env_remove("FTGATE_THREADS")
        .output()
        .expect("binary runs")
}

/// Runs with `--json` and returns (exit code, parsed report).
fn report(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = ftgate(&full);
    let code = out.status.code().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or_else(|e| {
        panic!(
            "no report for {args:?} ({e}): stdout {stdout} stderr {}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (code, v)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_writes_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t3.code");
    let (code, r) = report(&["build", "toric", "3", "-o", path_str(&f)]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["code"]["n"], 18);
    assert_eq!(r["result"]["code"]["k"], 2);
    assert!(std::fs::read_to_string(&f).unwrap().starts_with("ftgate-code 1"));

    let f = dir.path().join("rm.code");
    let (_, r) = report(&["build", "reed-muller", "3", "-o", path_str(&f)]);
    assert_eq!((r["result"]["code"]["n"].clone(), r["result"]["code"]["k"].clone()), (7.into(), 1.into()));
    let (code, r) = report(&["distance", path_str(&f)]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["d"], 3);
}

#[test]
fn build_rejects_bad_size() {
    let dir = tempfile::tempdir().unwrap();
    let out = ftgate(&["build", "toric", "1", "-o", path_str(&dir.path().join("x"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("L >= 2"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(ftgate(&["distance"]).status.code(), Some(1));
    assert_eq!(ftgate(&["verify", "--suite", "nope"]).status.code(), Some(1));
    assert_eq!(ftgate(&["distance", "no-such-code"]).status.code(), Some(1));
    assert_eq!(ftgate(&["clean", "steane", "--region", "0..3"]).status.code(), Some(1));
    assert_eq!(ftgate(&["--help"]).status.code(), Some(0));
}

#[test]
fn distances() {
    let (_, r) = report(&["distance", "steane"]);
    assert_eq!(r["result"]["d"], 3);
    let w = r["result"]["witness"].as_str().unwrap();
    assert_eq!(w.chars().filter(|c| "XYZ".contains(*c)).count(), 3);
    let (_, r) = report(&["distance", "toric:4"]);
    assert_eq!(r["result"]["d"], 4);
    let (_, r) = report(&["distance", "toric:3", "--wmax", "1"]);
    assert_eq!(r["result"]["exact"], false);
    assert_eq!(r["result"]["d_at_least"], 2);
}

#[test]
fn clean_reports_counts_and_witness() {
    let (code, r) = report(&["clean", "toric:3", "--region", "box 0..3 x 0..1"]);
    assert_eq!(code, 0);
    let res = &r["result"];
    assert_eq!(res["region_size"], 6);
    assert_eq!(res["identity_holds"], true);
    assert_eq!(res["correctable"], false);
    assert!(res["witness"].is_string());

    let (_, r) = report(&["clean", "steane", "--region", "0,1", "--operator", "XXXXXXX"]);
    let res = &r["result"];
    assert_eq!(res["correctable"], true);
    let cleaned = res["cleaned"].as_str().unwrap();
    assert!(cleaned[1..3].chars().all(|c| c == 'I'), "{cleaned}");
}

#[test]
fn partitions_replay_through_gate_bound() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str], Option<u64>); 3] = [
        ("toric:12", &["--scheme", "tiling", "--tile", "6"], Some(2)),
        ("haah:3", &["--scheme", "tubes", "--tile", "3", "--width", "1"], Some(2)),
        ("toric:4", &["--scheme", "tubes", "--tile", "2", "--width", "1"], None),
    ];
    for (i, (code, flags, expected)) in cases.into_iter().enumerate() {
        let f = dir.path().join(format!("p{i}.json"));
        let mut args = vec!["partition", code];
        args.extend_from_slice(flags);
        args.extend_from_slice(&["-o", path_str(&f)]);
        let (status, _) = report(&args);
        assert_eq!(status, 0);
        let (status, r) = report(&["gate-bound", code, "--partition", path_str(&f)]);
        assert_eq!(status, 0);
        match expected {
            Some(m) => assert_eq!(r["result"]["m"], m, "{code}"),
            None => {
                assert_eq!(r["result"]["outcome"], "precondition-failure");
                assert!(r["result"]["witness"].as_str().unwrap().contains('X'));
            }
        }
    }
}

#[test]
fn non_covering_partition_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, r#"{"num_qubits": 7, "r0": [0, 1], "regions": [[2, 3]]}"#).unwrap();
    let out = ftgate(&["gate-bound", "steane", "--partition", path_str(&f)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("uncovered"));
}

#[test]
fn gate_levels() {
    for (spec, level) in [("T@0", 3), ("S@0", 2), ("Z@0", 1), ("CZ@0,1", 2), ("CCZ@0,1,2", 3), ("", 0)] {
        let (_, r) = report(&["gate-level", "--gates", spec]);
        assert_eq!(r["result"]["level"]["value"], level, "{spec}");
    }
    assert_eq!(ftgate(&["gate-level", "--gates", "H@0"]).status.code(), Some(1));
}

#[test]
fn logical_actions() {
    let (_, r) = report(&["logical-action", "steane", "--gates", "rot(2)@all"]);
    assert_eq!(r["result"]["preserves_codespace"], true);
    assert_eq!(r["result"]["level"]["value"], 2);
    let (_, r) = report(&["logical-action", "reed-muller:4", "--gates", "T@all"]);
    assert_eq!(r["result"]["level"]["value"], 3);
    let (_, r) = report(&["logical-action", "steane", "--gates", "T@all"]);
    assert_eq!(r["result"]["preserves_codespace"], false);
}

#[test]
fn loss_curve_is_reproducible_and_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let rep = dir.path().join("r.json");
    let args = [
        "--report",
        path_str(&rep),
        "loss-curve",
        "toric:4",
        "--p",
        "0.1:0.5:0.2",
        "--trials",
        "100",
        "--seed",
        "11",
        "--csv",
        path_str(&csv),
    ];
    assert_eq!(ftgate(&args).status.code(), Some(0));
    let first: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(ftgate(&args).status.code(), Some(0));
    let second: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(first["result"], second["result"]);
    assert_eq!(first["seed"], 11);
    assert!(first["invocation"].as_array().unwrap().iter().any(|a| a == "loss-curve"));
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("p,trials,successes,fraction,ci_low,ci_high"));
    assert_eq!(table.lines().count(), 4);

    // Thread count does not change results.
    let out = Command::new(env!("CARGO_BIN_EXE_ftgate"))
        .args(["--json", "loss-curve", "toric:4", "--p", "0.1:0.5:0.2", "--trials", "100", "--seed", "11"])
        .env("FTGATE_THREADS", "3")
        .output()
        .unwrap();
    let threaded: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(threaded["result"], first["result"]);
}

#[test]
fn verify_suites() {
    for suite in ["lemma3", "lemma4", "appendixA", "dense", "spread"] {
        let (status, r) = report(&["verify", "--suite", suite, "--samples", "60"]);
        assert_eq!(status, 0, "{suite}: {r}");
        assert_eq!(r["violation"], false);
    }
    let (status, r) = report(&["verify", "--suite", "union", "--seed", "3"]);
    assert_eq!(status, 0);
    let bare = &r["result"]["union"]["details"]["bacon_shor_bare"];
    assert_eq!(bare["pairs_tested"], 200);
    assert!(bare["counterexample_count"].as_u64().unwrap() > 0);
    assert_eq!(r["result"]["union"]["details"]["toric_dressed"]["counterexample_count"], 0);
}
