mod common;

use ddsim::integrator::{restart, run, Checkpoint};
use ddsim::Error;

fn assert_restart_matches(config: &ddsim::config::RunConfig) {
    let full = run(config).unwrap();
    assert!(!full.checkpoints.is_empty());
    let cp = Checkpoint::from_json(&full.checkpoints[0].to_json()).unwrap();
    let resumed = restart(&cp, config).unwrap();
    let again = restart(&cp, config).unwrap();
    assert_eq!(resumed.final_state.spectral(), full.final_state.spectral());
    assert_eq!(again.final_state.spectral(), resumed.final_state.spectral());
    let tail = &full.records[full.records.len() - resumed.records.len()..];
    assert_eq!(tail, &resumed.records[..]);
}

#[test]
fn etdrk4_restart_is_bit_identical() {
    assert_restart_matches(&common::burgers("etdrk4", 70));
}

#[test]
fn imex_restart_is_bit_identical() {
    assert_restart_matches(&common::burgers("imex_cnab2", 70));
}

#[test]
fn restart_rejects_changed_config() {
    let config = common::burgers("etdrk4", 100);
    let cp = run(&config).unwrap().checkpoints.remove(0);
    let mut changed = config.clone();
    changed.stepper.dt = 0.005;
    changed.stepper.t_end = 2.0;
    assert!(matches!(restart(&cp, &changed), Err(Error::DigestMismatch { .. })));
}

#[test]
fn checkpoint_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let config = common::burgers("imex_cnab2", 100);
    let cp = run(&config).unwrap().checkpoints.remove(0);
    let path = dir.path().join("cp.json");
    cp.write(&path).unwrap();
    let back = Checkpoint::read(&path).unwrap();
    assert_eq!(back.state, cp.state);
    assert_eq!(back.prev_nonlinear, cp.prev_nonlinear);
    assert_eq!(back.step, 100);
}

#[test]
fn truncated_checkpoint_is_rejected() {
    let config = common::burgers("etdrk4", 100);
    let cp = run(&config).unwrap().checkpoints.remove(0);
    let mut value: serde_json::Value = serde_json::from_str(&cp.to_json()).unwrap();
    value["state"].as_array_mut().unwrap().pop();
    assert!(Checkpoint::from_json(&value.to_string()).is_err());
}
