//! The `mcheck` binary: output format, exit codes and emitted files.

mod common;

use common::fixture;
use std::process::{Command, Output};

fn mcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcheck")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

#[test]
fn ic3_proves_safe1() {
    let o = mcheck(&["--engine", "ic3", &path("safe1.aag")]);
    assert_eq!(o.status.code(), Some(20));
    assert_eq!(stdout(&o), "0\nb0\n.\n");
}

#[test]
fn bmc_writes_witness() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    let o = mcheck(&["--engine", "bmc", "--bmc-max", "10", &path("unsafe1.aag"), "--witness", w.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(10));
    let out = stdout(&o);
    assert!(out.starts_with("1\nb0\n"));
    assert_eq!(std::fs::read_to_string(&w).unwrap(), out);
    // the written witness verifies, and fails on a different model
    let o = mcheck(&["--verify", "--witness", w.to_str().unwrap(), &path("unsafe1.aig")]);
    assert_eq!(o.status.code(), Some(10), "{}", String::from_utf8_lossy(&o.stderr));
    let o = mcheck(&["--verify", "--witness", w.to_str().unwrap(), &path("safe1.aag")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn portfolio_on_cnt2() {
    let o = mcheck(&["--engine", "portfolio", "--workers", "4", &path("cnt2.aag")]);
    assert_eq!(o.status.code(), Some(10));
    assert_eq!(stdout(&o), "1\nb0\n00\n\n\n\n\n.\n");
}

#[test]
fn certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("cert.txt");
    let stats = dir.path().join("stats.json");
    let model = path("reset_pair8.aig");
    let o = mcheck(&["--engine", "ic3", "--ctg", "--certificate", c.to_str().unwrap(), "--stats", stats.to_str().unwrap(), &model]);
    assert_eq!(o.status.code(), Some(20));
    let text = std::fs::read_to_string(&c).unwrap();
    assert!(text.starts_with("inv "));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(json["status"], "0");
    assert!(json["engines"][0]["ic3"]["lemmas"].as_u64().unwrap() > 0);
    let o = mcheck(&["--verify", "--certificate", c.to_str().unwrap(), &model]);
    assert_eq!(o.status.code(), Some(20));
    // here ¬bad alone is inductive, so any clause subset passes; a clause
    // excluding the reset state does not
    let latches = text.lines().next().unwrap().split(' ').nth(2).unwrap();
    std::fs::write(&c, format!("inv 0 {latches}\n")).unwrap();
    let o = mcheck(&["--verify", "--certificate", c.to_str().unwrap(), &model]);
    assert_eq!(o.status.code(), Some(20));
    std::fs::write(&c, format!("inv 1 {latches}\n1 0\n")).unwrap();
    let o = mcheck(&["--verify", "--certificate", c.to_str().unwrap(), &model]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn kind_and_unknown() {
    let o = mcheck(&["--engine", "kind", &path("safe1.aag")]);
    assert_eq!(o.status.code(), Some(20));
    let o = mcheck(&["--engine", "bmc", "--bmc-max", "3", &path("safe1.aag")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2\nb0\n.\n");
}

#[test]
fn time_limit_gives_unknown() {
    let o = mcheck(&["--engine", "bmc", "--bmc-max", "100000000", "--time-limit", "0.5", &path("wrap4.aag")]);
    // wrap4 is unsafe at depth 16, found quickly; a safe design times out
    assert_eq!(o.status.code(), Some(10));
    let o = mcheck(&["--engine", "bmc", "--bmc-max", "100000000", "--time-limit", "0.5", &path("safe1.aag")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["--engine", "bogus", "x.aag"],
        vec!["--ctg", "--exctg", "--engine", "ic3", "safe1.aag"],
        vec!["--engine", "bmc", "--inn"],
        vec![],
    ] {
        let mut args: Vec<String> = args.into_iter().map(String::from).collect();
        if let Some(last) = args.last_mut() {
            if last.ends_with(".aag") {
                *last = path(last);
            }
        }
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(mcheck(&refs).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(mcheck(&["--engine", "bmc", "--inn", &path("safe1.aag")]).status.code(), Some(2));
    assert_eq!(mcheck(&["--bad-index", "3", &path("safe1.aag")]).status.code(), Some(2));
    assert_eq!(mcheck(&["/nonexistent.aag"]).status.code(), Some(2));
    assert_eq!(mcheck(&["--verify", &path("safe1.aag")]).status.code(), Some(2));
}

#[test]
fn second_property_by_index() {
    // random01 has two properties; both indices run and verify
    for i in ["0", "1"] {
        let o = mcheck(&["--engine", "ic3", "--bad-index", i, &path("random01.aag")]);
        let code = o.status.code().unwrap();
        assert!(code == 10 || code == 20, "{o:?}");
        assert!(stdout(&o).contains(&format!("\nb{i}\n")));
    }
}
