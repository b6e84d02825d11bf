use std::process::{Command, Output};

use gkz_cli::{run, Command as Cmd, InstanceConfig};
use serde_json::Value;

fn gkz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkz")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn kloosterman() -> InstanceConfig {
    let mut c = InstanceConfig::new(3);
    c.matrix = vec![vec![1, -1]];
    c
}

#[test]
fn verify_kloosterman_passes() {
    let out = gkz(&["verify", "--p", "3", "--matrix", "1,-1", "--x", "1,1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    for k in ["rank", "spectrum", "purity", "top_count"] {
        assert_eq!(r["results"]["report"]["checks"][k], "pass", "{k}");
    }
    assert_eq!(r["results"]["report"]["weights"]["1"], 2);
}

#[test]
fn weights_kloosterman() {
    let r = json(&gkz(&["weights", "--p", "3", "--matrix", "1,-1", "--json"]));
    assert_eq!(r["results"]["E"], serde_json::json!({ "3": 2 }));
    assert_eq!(r["results"]["e"], 2);
}

#[test]
fn exit_codes() {
    assert_eq!(gkz(&["volume", "--p", "3", "--matrix", "1,0;1"]).status.code(), Some(2));
    assert_eq!(gkz(&["nosuch", "--p", "3"]).status.code(), Some(2));
    assert_eq!(gkz(&["sum", "--p", "4"]).status.code(), Some(2));
    assert_eq!(gkz(&["lfactor", "--p", "5", "--matrix", "1,0;0,1", "--budget", "100"]).status.code(), Some(3));
    let bad = gkz(&["verify", "--p", "5", "--matrix", "2,1,0;0,1,2", "--x", "1,2,1", "--json"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["results"]["report"]["status"], "hypotheses unverified");
    let err: Value = serde_json::from_slice(&gkz(&["sum", "--p", "5", "--matrix", "1,2", "--x", "1"]).stderr).unwrap();
    assert_eq!(err["error"]["code"], 2);
}

#[test]
fn config_files_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let toml_path = dir.path().join("inst.toml");
    std::fs::write(&toml_path, "p = 5\nmatrix = [[1, 2]]\nx = [0, 1]\n").unwrap();
    let r = json(&gkz(&["lfactor", "--config", toml_path.to_str().unwrap(), "--json"]));
    assert_eq!(r["results"]["spectrum"]["weights"], serde_json::json!({ "0": 1, "1": 1 }));
    let json_path = dir.path().join("inst.json");
    std::fs::write(&json_path, r#"{"p": 7, "matrix": [[1, -1]], "x": [1, "g^2"]}"#).unwrap();
    let r = json(&gkz(&["sum", "--config", json_path.to_str().unwrap(), "--p", "5", "--json"]));
    assert_eq!(r["config"]["p"], 5);
    let out_path = dir.path().join("report.json");
    let out = gkz(&["gauss", "--p", "5", "--chi", "1", "--output", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(saved["checks"]["norm_is_q"], true);
}

#[test]
fn reports_replay() {
    let mut c = kloosterman();
    c.p = 5;
    c.seed = 9;
    let first = run(Cmd::Lfactor, &c).unwrap();
    assert!(first.sampled.is_some());
    let replay = run(Cmd::Lfactor, &first.config).unwrap();
    assert!(replay.sampled.is_none());
    assert_eq!(serde_json::to_string(&first.results).unwrap(), serde_json::to_string(&replay.results).unwrap());
    let again = run(Cmd::Lfactor, &c).unwrap();
    assert_eq!(first.config, again.config);
}

#[test]
fn every_command_runs() {
    let mut c = InstanceConfig::new(5);
    c.matrix = vec![vec![1, 0, 1], vec![0, 1, 1]];
    c.chi = vec![1, 1];
    for cmd in [Cmd::Sum, Cmd::Batch, Cmd::Volume, Cmd::AlphaBeta, Cmd::Weights, Cmd::Resonance, Cmd::Nondegen] {
        let r = run(cmd, &c).unwrap();
        assert!(r.passed(), "{cmd:?}: {:?}", r.checks);
    }
    let mut one = InstanceConfig::new(5);
    one.chi = vec![1];
    for cmd in [Cmd::Gauss, Cmd::Kloosterman, Cmd::Katz] {
        let r = run(cmd, &one).unwrap();
        assert!(r.passed(), "{cmd:?}: {:?}", r.checks);
    }
    one.chi = vec![1, 2];
    one.shape = Some([2, 1]);
    assert!(run(Cmd::Katz, &one).unwrap().passed());
    let r = run(Cmd::Identities, &InstanceConfig::new(3)).unwrap();
    assert_eq!(r.checks.len(), 4);
    assert!(r.passed());
    assert!(!r.summary().is_empty());
}
