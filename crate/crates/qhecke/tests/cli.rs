//! End-to-end checks of the `qhecke` binary: subcommands, output formats,
//! exit codes, and the run-time catalog extension point.

use std::process::{Command, Output};

fn qhecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhecke"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn list_shows_registry() {
    let out = qhecke(&["list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("warnaar"));
    assert!(text.contains("chan-kim-3.6"));
    assert!(text.lines().count() >= 28);
}

#[test]
fn verify_single_identity_text() {
    let out = qhecke(&["verify", "--id", "warnaar", "--order", "40"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("ok   warnaar"));
}

#[test]
fn verify_single_identity_json() {
    let out = qhecke(&["verify", "--id", "hm-m-half", "--format", "json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["id"], "hm-m-half");
    assert_eq!(report["equal"], true);
    assert_eq!(report["first_mismatch_exponent"], serde_json::Value::Null);
}

#[test]
fn verify_all_passes_and_exits_zero() {
    let out = qhecke(&["verify", "--all", "--order", "30"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("identities verified"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn failing_identity_sets_exit_code() {
    let dir = std::env::temp_dir().join(format!("qhecke-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.toml");
    std::fs::write(
        &path,
        r#"
[[identity]]
id = "deliberately-wrong"
lhs = "Jm(1)"
rhs = "Jm(1) + q"
order = 20
"#,
    )
    .unwrap();
    let out = qhecke(&[
        "verify",
        "--id",
        "deliberately-wrong",
        "--catalog",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("first mismatch at q^1"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn expand_text_and_json() {
    let out = qhecke(&["expand", "--expr", "Jm(1)", "--order", "12"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 - q - q^2 + q^5 + q^7 - q^12 + O(q^13)");

    let out = qhecke(&["expand", "--expr", "m(q; 2; -1)", "--order", "6", "--format", "json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["order"], 6);
    assert_eq!(value["terms"], serde_json::json!([[0, "1/2"]]));
}

#[test]
fn expand_error_is_positioned_and_nonzero() {
    let out = qhecke(&["expand", "--expr", "f(1,2,1; q,q"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax error"));

    let out = qhecke(&["expand", "--expr", "m(q; 1; q)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("integral power"));
}

#[test]
fn thread_cap_env_is_respected() {
    let out = Command::new(env!("CARGO_BIN_EXE_qhecke"))
        .args(["verify", "--all", "--order", "20"])
        .env("QHECKE_THREADS", "1")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
}
