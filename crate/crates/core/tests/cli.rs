use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wavepacket"))
}

#[test]
fn run_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"a": 1.0, "t_end": 0.5, "dt_out": 0.1, "families": ["G", "F2"], "n_max_var": 95, "n_max_exact": 127}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let status = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        status.status.success(),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );

    let csv = std::fs::read_to_string(out.join("run_a+1.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,W_G,W_F2,x_exact,x_G,x_F2");
    assert_eq!(lines.count(), 6);

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary_a+1.json")).unwrap())
            .unwrap();
    assert_eq!(summary["a"], 1.0);
    assert!(summary["W_bar"]["F2"].as_f64().unwrap() > 0.9);
    assert!(summary["W_bar"].get("F1").is_none());
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"a": 1.0, "unknown_key": 3}"#).unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args(["sweep", "--axis", "sideways"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args(["run", "--config"])
        .arg(dir.path().join("missing.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    // a displacement this large does not fit in 17 Fock levels
    std::fs::write(
        &cfg,
        r#"{"alpha0": [3.0, 0.0], "t_end": 0.1, "dt_out": 0.1, "n_max_var": 16, "n_max_exact": 17}"#,
    )
    .unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn selftest_passes() {
    let out = bin().arg("selftest").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("ok"));
}
