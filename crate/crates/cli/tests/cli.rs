use std::path::PathBuf;
use std::process::{Command, Output};

use sdg_core::connection::ConnectionSymbol;
use sdg_core::sample::{Sampler, DEFAULT_RANGE};

fn sdg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdg"))
        .args(args)
        .output()
        .expect("spawn sdg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("sdg-cli-{}-{name}", std::process::id()))
}

#[test]
fn heisenberg_demo_recovers_the_bracket() {
    let o = sdg(&["demo", "heisenberg", "E12", "E23"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("[E12, E23] = E13"), "{text}");
    assert!(text.contains("abelian: no"), "{text}");
}

#[test]
fn gl2_demo_bracket() {
    let o = sdg(&["demo", "gl2", "E12", "E21"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[E12, E21] = E11 - E22"));
}

#[test]
fn demo_on_a_symmetric_connection_file() {
    let path = scratch("symbol.json");
    let symbol = ConnectionSymbol::random(2, 1, &mut Sampler::new(3, DEFAULT_RANGE)).symmetrize();
    std::fs::write(&path, symbol.to_json()).unwrap();
    let o = sdg(&["demo", path.to_str().unwrap(), "e1", "1,-1/2", "--base", "1/3,2"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("abelian: yes"), "{text}");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify", "--trials", "0"][..],
        &["verify", "--suites", "bogus"],
        &["verify", "--group", "so3"],
        &["demo", "heisenberg", "E12"],
        &["demo", "heisenberg", "E12", "E99"],
        &["frobnicate"],
    ] {
        assert_eq!(sdg(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(sdg(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_report_written_to_file() {
    let path = scratch("report.json");
    let o = sdg(&[
        "verify",
        "--suites",
        "weil,spaces",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    let checks = report["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks
        .iter()
        .all(|c| c["status"] == "pass" && c.get("elapsed_ms").is_none()));
    assert_eq!(report["summary"]["fail"], 0);
}

#[test]
fn seed_is_read_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_sdg"))
        .args(["verify", "--suites", "weil", "--format", "json"])
        .env("SDG_SEED", "7")
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["config"]["seed"], 7);
}

#[test]
fn text_report_lists_every_check() {
    let o = sdg(&["verify", "--suites", "liegroup", "--group", "heisenberg"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("heisenberg_tangent_bracket_is_commutator"), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 6);
}
