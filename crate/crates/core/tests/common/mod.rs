#![allow(dead_code)]

use ddsim::config::RunConfig;

/// Short Burgers run on a small grid.
pub fn burgers(scheme: &str, checkpoint_stride: u64) -> RunConfig {
    RunConfig::from_toml(&format!(
        r#"
[grid]
n_modes = 128
period = 62.83185307179586

[physics]
delta = 0.5
nu = 0.1
u_tilde = 1.0
flux = "burgers"

[initial]
kind = "gaussian_packet"
amplitude = 0.5
width = 3.0
wavenumber = 1.0
zero_mean = true

[stepper]
dt = 0.01
scheme = "{scheme}"
t_end = 2.0
snapshot_stride = 10
checkpoint_stride = {checkpoint_stride}
"#
    ))
    .expect("valid config")
}

pub fn linear_modes(nu: f64, flux: &str, modes: &str, t_end: f64) -> RunConfig {
    RunConfig::from_toml(&format!(
        r#"
[grid]
n_modes = 64
period = 6.283185307179586

[physics]
delta = 1.0
nu = {nu}
flux = "{flux}"

[initial]
kind = "mode_sum"
modes = {modes}

[stepper]
dt = 0.001
t_end = {t_end}
snapshot_stride = 50
"#
    ))
    .expect("valid config")
}
