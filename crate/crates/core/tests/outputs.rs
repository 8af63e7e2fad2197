mod common;

use std::fs;

use ddsim::harness::run_config;

#[test]
fn repeated_runs_write_identical_bytes() {
    let config = common::burgers("etdrk4", 100);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_config(&config, Some(a.path())).unwrap();
    run_config(&config, Some(b.path())).unwrap();
    for name in ["ledger.csv", "summary.json", "final_state.json", "config.toml", "checkpoints/step_0000000100.json"] {
        let left = fs::read(a.path().join(name)).unwrap();
        let right = fs::read(b.path().join(name)).unwrap();
        assert!(left == right, "{name} differs between runs");
    }
}

#[test]
fn ledger_has_one_row_per_snapshot() {
    let config = common::burgers("etdrk4", 100);
    let dir = tempfile::tempdir().unwrap();
    let (_, summary) = run_config(&config, Some(dir.path())).unwrap();
    let csv = fs::read_to_string(dir.path().join("ledger.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), ddsim::diagnostics::CSV_HEADER);
    assert_eq!(lines.count(), summary.snapshots);
    assert_eq!(summary.snapshots, 21);
}

#[test]
fn zero_initial_data_stays_zero() {
    let config = common::linear_modes(0.1, "burgers", "[{ amplitude = 0.0, mode = 1 }]", 0.5);
    let traj = ddsim::integrator::run(&config).unwrap();
    assert!(traj.final_state.spectral().iter().all(|c| c.norm() == 0.0));
    for r in &traj.records {
        assert_eq!(r.norms.l2, 0.0);
        assert_eq!(r.norms.sup_psi, 0.0);
        assert_eq!(r.energy_residual, 0.0);
        assert_eq!(r.apriori_int8, 0.0);
        assert!(r.interpolation_holds);
    }
}
