//! End-to-end tests for the `sagents` binary.

use std::path::Path;
use std::process::{Command, Output};

fn sagents(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sagents"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn run_writes_artifacts_and_replay_matches() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let out = sagents(
        &[
            "run",
            "--task",
            "collection:stone:15",
            "--org",
            "toa:3",
            "--mode",
            "roundbased",
            "--seed",
            "5",
            "--out",
            "artifacts",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let report: serde_json::Value =
        serde_json::from_str(&stdout).expect("report on stdout is JSON");
    assert_eq!(report["success"], serde_json::Value::Bool(true));
    assert_eq!(report["mode"], "roundbased");
    for file in ["report.json", "events.jsonl", "pool.jsonl", "world_final.json"] {
        assert!(tmp.path().join("artifacts").join(file).exists(), "{file} missing");
    }

    let replay = sagents(
        &[
            "replay",
            "--report",
            "artifacts/report.json",
            "--events",
            "artifacts/events.jsonl",
        ],
        tmp.path(),
    );
    assert!(replay.status.success(), "stderr: {}", String::from_utf8_lossy(&replay.stderr));
    assert!(String::from_utf8_lossy(&replay.stdout).contains("replay matches"));
}

#[test]
fn validate_org_reports_chain_as_valid_and_cyclic_file_as_invalid() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let ok = sagents(&["validate-org", "--org", "coa:3"], tmp.path());
    assert!(ok.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&ok.stdout)).expect("json");
    assert_eq!(report["is_valid"], serde_json::Value::Bool(true));
    assert!(report["command_cycles"].as_array().unwrap().is_empty());

    // A hand-written tree whose agents command each other in a loop.
    let doc = r#"{
        "structure": "tree",
        "root": "a",
        "agents": ["a", "b"],
        "edges": [["a", "b"], ["b", "a"]]
    }"#;
    std::fs::write(tmp.path().join("loop.json"), doc).expect("write");
    let bad = sagents(&["validate-org", "--file", "loop.json"], tmp.path());
    assert!(!bad.status.success(), "cyclic tree must be rejected");
    let report: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&bad.stdout)).expect("json");
    assert_eq!(report["is_valid"], serde_json::Value::Bool(false));
    assert!(!report["command_cycles"].as_array().unwrap().is_empty());
}

#[test]
fn experiment_writes_summary_and_cells() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let out = sagents(
        &[
            "experiment",
            "--task",
            "collection:log:20",
            "--orgs",
            "solo,toa:3",
            "--modes",
            "nonobstructive",
            "--seeds",
            "1,2",
            "--out",
            "exp",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("config hash:"));
    assert!(stdout.contains("toa:3"));
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(tmp.path().join("exp/summary.json")).expect("summary"),
    )
    .expect("summary json");
    assert_eq!(summary["cells"].as_array().unwrap().len(), 4);
    assert!(tmp
        .path()
        .join("exp/runs/toa3-nonobstructive/2/report.json")
        .exists());
}

#[test]
fn bad_arguments_fail_cleanly() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let out = sagents(
        &["run", "--task", "paint:fence", "--org", "toa:3"],
        tmp.path(),
    );
    assert!(!out.status.success());
    let out = sagents(
        &["run", "--task", "collection:stone:5", "--org", "ring:9"],
        tmp.path(),
    );
    assert!(!out.status.success());
}
