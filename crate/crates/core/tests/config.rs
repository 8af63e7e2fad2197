use ddsim::config::RunConfig;
use ddsim::Error;

const BASE: &str = r#"
[physics]
delta = 1.0
nu = 0.1
flux = "burgers"

[initial]
kind = "gaussian"
amplitude = 1.0
width = 5.0

[stepper]
dt = 0.01
t_end = 1.0
"#;

fn rejection(text: &str) -> Vec<String> {
    match RunConfig::from_toml(text) {
        Err(Error::Config(list)) => list,
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn base_config_is_accepted() {
    let config = RunConfig::from_toml(BASE).unwrap();
    assert_eq!(config.grid.n_modes, 512);
    assert_eq!(config.total_steps(), 100);
}

#[test]
fn negative_viscosity_is_rejected() {
    let list = rejection(&BASE.replace("nu = 0.1", "nu = -0.1"));
    assert!(list.iter().any(|m| m.contains("nu >= 0")));
}

#[test]
fn excessive_growth_exponent_is_rejected() {
    let list = rejection(&BASE.replace("flux = \"burgers\"", "flux = \"burgers\"\nq_declared = 5.5"));
    assert!(list.iter().any(|m| m.contains("q <= 5")));
}

#[test]
fn flux_growth_beyond_declared_exponent_is_rejected() {
    let list = rejection(&BASE.replace("flux = \"burgers\"", "flux = \"poly:[0,0,0,0,1]\"\nq_declared = 1"));
    assert!(list.iter().any(|m| m.contains("growth condition")));
}

#[test]
fn non_integer_step_count_is_rejected() {
    rejection(&BASE.replace("t_end = 1.0", "t_end = 1.005"));
}

#[test]
fn unresolved_initial_data_is_rejected() {
    rejection(&BASE.replace("width = 5.0", "width = 0.05"));
}

#[test]
fn unknown_keys_fail_to_parse() {
    let text = BASE.replace("nu = 0.1", "nu = 0.1\nviscosity = 2.0");
    assert!(matches!(RunConfig::from_toml(&text), Err(Error::Parse(_))));
}

#[test]
fn violations_are_reported_together() {
    let text = BASE.replace("nu = 0.1", "nu = -1.0").replace("dt = 0.01", "dt = -0.01");
    assert!(rejection(&text).len() >= 2);
}
