use std::path::Path;
use std::process::Command;

fn ddsim(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ddsim"))
        .args(args)
        .arg("--out")
        .arg(out)
        .arg("--quiet")
        .output()
        .unwrap()
}

const GOOD: &str = r#"
[grid]
n_modes = 64
period = 6.283185307179586

[physics]
delta = 1.0
nu = 0.05
flux = "burgers"

[initial]
kind = "mode_sum"
modes = [{ amplitude = 0.2, mode = 1 }]

[stepper]
dt = 0.01
t_end = 0.5
snapshot_stride = 5
checkpoint_stride = 20
"#;

#[test]
fn run_and_restart_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("good.toml");
    std::fs::write(&config, GOOD).unwrap();
    let out = dir.path().join("run");
    let status = ddsim(&["run", config.to_str().unwrap()], &out);
    assert_eq!(status.status.code(), Some(0));
    for name in ["ledger.csv", "summary.json", "final_state.json", "norms.svg", "config.toml"] {
        assert!(out.join(name).exists(), "missing {name}");
    }
    let cp = out.join("checkpoints/step_0000000020.json");
    let restarted = dir.path().join("restart");
    let status = ddsim(&["restart", cp.to_str().unwrap()], &restarted);
    assert_eq!(status.status.code(), Some(0));
    assert_eq!(
        std::fs::read(out.join("final_state.json")).unwrap(),
        std::fs::read(restarted.join("final_state.json")).unwrap()
    );
}

#[test]
fn rejected_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, GOOD.replace("nu = 0.05", "nu = -0.05")).unwrap();
    let output = ddsim(&["run", config.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("nu >= 0"));
}

#[test]
fn missing_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let output = ddsim(&["run", "/nonexistent/config.toml"], dir.path());
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn unknown_suite_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let output = ddsim(&["verify", "--suite", "z9"], dir.path());
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn single_criterion_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let output = ddsim(&["verify", "--suite", "a1"], dir.path());
    assert_eq!(output.status.code(), Some(0));
    assert!(dir.path().join("verify.json").exists());
}

#[test]
fn sweep_reports_worst_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let configs = dir.path().join("configs");
    std::fs::create_dir(&configs).unwrap();
    std::fs::write(configs.join("good.toml"), GOOD).unwrap();
    std::fs::write(configs.join("bad.toml"), GOOD.replace("nu = 0.05", "nu = -0.05")).unwrap();
    let out = dir.path().join("sweep");
    let output = ddsim(&["sweep", configs.to_str().unwrap()], &out);
    assert_eq!(output.status.code(), Some(1));
    assert!(out.join("sweep.json").exists());
}
