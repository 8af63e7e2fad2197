//! Independent ground truth: closed-form linear solutions, refined
//! reference runs, and a finite-difference PDE residual that uses no
//! spectral machinery.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::integrator::run;
use crate::spectral::{make_grid, Field, SpectralGrid};

/// `amplitude · sin(wavenumber·x + phase)` at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleMode {
    pub amplitude: f64,
    pub wavenumber: f64,
    pub phase: f64,
}

/// Exact solution of `ψₜ + cψₓ = −δψₓₓₓ − νψₓₓₓₓ`: each mode evolves by
/// `e^{λt}` with `λ = −ick + iδk³ − νk⁴`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearOracle {
    pub modes: Vec<OracleMode>,
    pub delta: f64,
    pub nu: f64,
    pub c: f64,
}

impl LinearOracle {
    pub fn exponent(&self, k: f64) -> Complex64 {
        Complex64::new(-self.nu * k.powi(4), -self.c * k + self.delta * k.powi(3))
    }
}

pub fn linear_solution(oracle: &LinearOracle, t: f64, grid: &Arc<SpectralGrid>) -> Result<Field> {
    let p = grid.period();
    for m in &oracle.modes {
        let j = m.wavenumber * p / (2.0 * PI);
        let representable = (j - j.round()).abs() <= 1e-9 * j.abs().max(1.0) && j.round().abs() < (grid.n_modes() / 2) as f64;
        if !representable {
            return Err(Error::InvalidArgument(format!(
                "wavenumber {} is not representable on a grid of {} modes with period {p}",
                m.wavenumber,
                grid.n_modes()
            )));
        }
    }
    let evolved: Vec<(f64, f64, f64)> = oracle
        .modes
        .iter()
        .map(|m| {
            let lam = oracle.exponent(m.wavenumber);
            (m.amplitude * (lam.re * t).exp(), m.wavenumber, m.phase + lam.im * t)
        })
        .collect();
    Ok(Field::from_fn(grid, |x| {
        evolved.iter().map(|&(a, k, ph)| a * (k * x + ph).sin()).sum()
    }))
}

/// Reruns `config` with twice the modes and half the step and restricts the
/// final state to the original grid.
pub fn reference_run(config: &RunConfig) -> Result<Field> {
    let mut fine = config.clone();
    fine.grid.n_modes *= 2;
    fine.stepper.dt *= 0.5;
    fine.stepper.checkpoint_stride = None;
    fine.stepper.snapshot_stride = fine.total_steps().max(1);
    let traj = run(&fine)?;
    let coarse = make_grid(config.grid.n_modes, config.grid.period)?;
    Ok(restrict(&traj.final_state, &coarse))
}

/// Keeps modes `|j| < N/2` of `field` on `coarse`.
pub fn restrict(field: &Field, coarse: &Arc<SpectralGrid>) -> Field {
    let fine_hat = field.spectral();
    let fine = field.grid();
    let mut hat = vec![Complex64::default(); coarse.n_modes()];
    for (i, slot) in hat.iter_mut().enumerate() {
        if i == coarse.nyquist_index() {
            continue;
        }
        if let Some(fi) = fine.index_of_mode(coarse.mode(i)) {
            *slot = fine_hat[fi];
        }
    }
    Field::from_spectral(coarse, hat)
}

// 8th-order central stencils on offsets −4..=4 and −5..=5.
const D1: [f64; 9] = [
    1.0 / 280.0,
    -4.0 / 105.0,
    1.0 / 5.0,
    -4.0 / 5.0,
    0.0,
    4.0 / 5.0,
    -1.0 / 5.0,
    4.0 / 105.0,
    -1.0 / 280.0,
];
const D3: [f64; 11] = [
    41.0 / 6048.0,
    -1261.0 / 15120.0,
    541.0 / 1120.0,
    -4369.0 / 2520.0,
    1669.0 / 720.0,
    0.0,
    -1669.0 / 720.0,
    4369.0 / 2520.0,
    -541.0 / 1120.0,
    1261.0 / 15120.0,
    -41.0 / 6048.0,
];
const D4: [f64; 11] = [
    -41.0 / 7560.0,
    1261.0 / 15120.0,
    -541.0 / 840.0,
    4369.0 / 1260.0,
    -1669.0 / 180.0,
    1529.0 / 120.0,
    -1669.0 / 180.0,
    4369.0 / 1260.0,
    -541.0 / 840.0,
    1261.0 / 15120.0,
    -41.0 / 7560.0,
];

fn apply_stencil(values: &[f64], stencil: &[f64], scale: f64) -> Vec<f64> {
    let n = values.len() as isize;
    let half = (stencil.len() / 2) as isize;
    (0..n)
        .map(|i| {
            let s: f64 = stencil
                .iter()
                .enumerate()
                .map(|(o, w)| w * values[(i + o as isize - half).rem_euclid(n) as usize])
                .sum();
            s * scale
        })
        .collect()
}

/// Max-norm residual of `ψₜ + ∂ₓf(ψ+ũ) + δψₓₓₓ + νψₓₓₓₓ` at the middle of
/// three equally spaced snapshots: central time difference and 8th-order
/// periodic finite differences on the nodal values.
pub fn fd_residual(
    snapshots: [&Field; 3],
    dt: f64,
    model: &FluxModel,
    u_tilde: f64,
    delta: f64,
    nu: f64,
) -> f64 {
    let [before, mid, after] = snapshots.map(|f| f.nodal().into_owned());
    let h = mid.len() as f64;
    let h = snapshots[1].grid().period() / h;
    let flux: Vec<f64> = mid.iter().map(|&u| model.eval_flux(u + u_tilde)).collect();
    let fx = apply_stencil(&flux, &D1, 1.0 / h);
    let u3 = apply_stencil(&mid, &D3, 1.0 / h.powi(3));
    let u4 = apply_stencil(&mid, &D4, 1.0 / h.powi(4));
    (0..mid.len())
        .map(|i| {
            let ut = (after[i] - before[i]) / (2.0 * dt);
            (ut + fx[i] + delta * u3[i] + nu * u4[i]).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(k: f64) -> LinearOracle {
        LinearOracle {
            modes: vec![OracleMode {
                amplitude: 1.0,
                wavenumber: k,
                phase: 0.0,
            }],
            delta: 0.0,
            nu: 0.0,
            c: 0.0,
        }
    }

    #[test]
    fn initial_data_reproduced() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let mut o = sine(3.0);
        o.delta = 1.0;
        o.nu = 0.3;
        let f = linear_solution(&o, 0.0, &g).unwrap();
        for (x, v) in g.nodes().zip(f.nodal().iter()) {
            assert_eq!(*v, (3.0 * x).sin());
        }
    }

    #[test]
    fn heat_like_decay() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let mut o = sine(1.0);
        o.nu = 1.0;
        let f = linear_solution(&o, 1.0, &g).unwrap();
        for (x, v) in g.nodes().zip(f.nodal().iter()) {
            assert!((v - (-1.0f64).exp() * x.sin()).abs() <= 1e-15);
        }
    }

    #[test]
    fn dispersive_phase() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let mut o = sine(1.0);
        o.delta = 1.0;
        let f = linear_solution(&o, PI, &g).unwrap();
        for (x, v) in g.nodes().zip(f.nodal().iter()) {
            // Im e^{i(x + π)}
            let want = Complex64::new(0.0, x + PI).exp().im;
            assert!((v - want).abs() <= 1e-15);
        }
    }

    #[test]
    fn unrepresentable_wavenumber() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        assert!(linear_solution(&sine(1.5), 0.0, &g).is_err());
        assert!(linear_solution(&sine(16.0), 0.0, &g).is_err());
    }

    #[test]
    fn stencils_are_consistent() {
        // Σw = 0; first moments give the derivative order
        let moment = |s: &[f64], p: i32| -> f64 {
            let half = (s.len() / 2) as i32;
            s.iter().enumerate().map(|(i, w)| w * ((i as i32 - half) as f64).powi(p)).sum()
        };
        assert!((moment(&D1, 1) - 1.0).abs() < 1e-13);
        assert!((moment(&D3, 3) - 6.0).abs() < 1e-12);
        assert!((moment(&D4, 4) - 24.0).abs() < 1e-11);
        for p in [0, 2, 3, 4, 5, 6, 7, 8] {
            assert!(moment(&D1, p).abs() < 1e-12, "d1 moment {p}");
        }
        for p in [0, 1, 2, 4, 5, 6, 7, 8, 9, 10] {
            assert!(moment(&D3, p).abs() < 1e-9, "d3 moment {p}");
        }
        for p in [0, 1, 2, 3, 5, 6, 7, 8, 9] {
            assert!(moment(&D4, p).abs() < 1e-9, "d4 moment {p}");
        }
    }

    fn linear_fd(dt: f64) -> f64 {
        let g = make_grid(256, 2.0 * PI).unwrap();
        let mut o = sine(3.0);
        o.modes[0].amplitude = 0.5;
        o.nu = 0.01;
        let t0 = 0.5;
        let s: Vec<Field> = [t0 - dt, t0, t0 + dt].iter().map(|&t| linear_solution(&o, t, &g).unwrap()).collect();
        fd_residual([&s[0], &s[1], &s[2]], dt, &FluxModel::zero(), 0.0, o.delta, o.nu)
    }

    #[test]
    fn fd_residual_linear() {
        let r1 = linear_fd(1e-2);
        let r2 = linear_fd(5e-3);
        assert!(r1 <= 1e-5, "{r1}");
        assert!((3.5..=4.5).contains(&(r1 / r2)), "{}", r1 / r2);
        let g = make_grid(32, 1.0).unwrap();
        let z = Field::zeros(&g);
        assert_eq!(fd_residual([&z, &z, &z], 0.1, &FluxModel::burgers(), 0.0, 1.0, 1.0), 0.0);
    }
}
