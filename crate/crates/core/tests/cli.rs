use std::process::Command;

fn cnpf(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cnpf")).args(args).output().unwrap()
}

#[test]
fn preset_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cnpf(&["factorize", "--preset", "h2-half-one-plus-z", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["report.json", "timing.json", "factorization.json", "psi.csv"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert!(String::from_utf8_lossy(&o.stderr).contains("pass  expected_psi"));
}

#[test]
fn reports_go_to_stdout_and_are_stable() {
    let a = cnpf(&["kernel", "--preset", "dirichlet-half-cnp"]);
    let b = cnpf(&["kernel", "--preset", "dirichlet-half-cnp"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"preset": "bergman-not-cnp", "kernel": {"expect_cnp": true}}"#).unwrap();
    let o = cnpf(&["kernel", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL  cnp"));
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(cnpf(&["factorize", "--preset", "no-such-preset"]).status.code(), Some(2));
    assert_eq!(cnpf(&["factorize", "--preset", "szego-szego", "--embed", "x"]).status.code(), Some(2));
    assert_eq!(cnpf(&["factorize", "--preset", "da2-da2", "--embed", "0.1,0"]).status.code(), Some(2));
    assert_eq!(cnpf(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn seed_flag_overrides_the_preset() {
    let a = cnpf(&["factorize", "--preset", "szego-szego", "--seed", "1"]);
    let b = cnpf(&["factorize", "--preset", "szego-szego", "--seed", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_ne!(a.stdout, b.stdout);
}
