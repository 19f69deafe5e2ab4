use std::path::Path;
use std::process::{Command, Output};

fn detour(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detour"))
        .args(args)
        .env("DETOUR_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn sphere_audit_passes_with_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = detour(&["verify", "--suite", "sphere-audit", "--n", "4..12", "--format", "json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["summary"]["fail"], 0);
    assert!(doc["checks"].as_array().unwrap().len() >= 25);
}

#[test]
fn failing_suite_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = detour(&["verify", "--suite", "symbols", "--n", "4"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn setup_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(detour(&["verify", "--suite", "nonsense"], dir.path()).status.code(), Some(2));
    assert_eq!(detour(&["verify", "--n", "5", "--suite", "star"], dir.path()).status.code(), Some(2));
    assert_eq!(detour(&["verify", "--config", "/nonexistent/run.toml"], dir.path()).status.code(), Some(2));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "[run]\nsuite = symbols\nn = 4\n[report]\nformat = json\n").unwrap();
    let out = detour(&["verify", "--config", cfg.to_str().unwrap(), "--suite", "sphere-audit"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["config"]["suite"], "sphere-audit");
}

#[test]
fn build_renders_maxwell_and_uses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["build", "--n", "4", "--k", "1", "--ell", "1"];
    let first = detour(&args, dir.path());
    assert_eq!(first.status.code(), Some(0));
    let text = stdout(&first);
    assert!(text.contains("order 2") && text.contains("self-adjoint: true") && text.contains("built"));
    let second = detour(&args, dir.path());
    assert!(stdout(&second).contains("cached"));

    let listed = detour(&["cache", "list"], dir.path());
    assert_eq!(stdout(&listed).lines().count(), 1);
    let cleared = detour(&["cache", "clear"], dir.path());
    assert!(stdout(&cleared).starts_with("removed 1 entries"));
    assert!(stdout(&detour(&["cache", "list"], dir.path())).is_empty());
}

#[test]
fn saved_report_renders_again() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = detour(
        &["verify", "--suite", "sphere-audit", "--n", "6", "--format", "json", "--output", path.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = detour(&["report", path.to_str().unwrap()], dir.path());
    assert_eq!(text.status.code(), Some(0));
    assert!(stdout(&text).contains("sphere-audit/n=6"));
}
