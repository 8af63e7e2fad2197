use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::phi::phi_functions;
use super::symbol::LinearSymbol;
use crate::error::{Error, Result};
use crate::flux::{FluxModel, NonlinearWork};
use crate::spectral::{Field, SpectralGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    Etdrk4,
    ImexCnab2,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Etdrk4 => "etdrk4",
            Scheme::ImexCnab2 => "imex_cnab2",
        }
    }
}

#[derive(Debug, Clone)]
enum Coefficients {
    /// Cox–Matthews weights per mode.
    Etdrk4 {
        e: Vec<Complex64>,
        e2: Vec<Complex64>,
        q: Vec<Complex64>,
        f1: Vec<Complex64>,
        f2: Vec<Complex64>,
        f3: Vec<Complex64>,
    },
    /// Crank–Nicolson on the linear part, Adams–Bashforth 2 on `N`.
    Imex { explicit: Vec<Complex64>, inv_implicit: Vec<Complex64> },
}

/// Fixed-step integrator of `ψ̂' = λψ̂ + N(ψ)` in spectral space.
///
/// The Nyquist coefficient is annihilated by every step, so odd derivatives
/// stay real.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Arc<SpectralGrid>,
    model: FluxModel,
    u_tilde: f64,
    dt: f64,
    coeffs: Coefficients,
    work: NonlinearWork,
    stages: [Vec<Complex64>; 7],
    prev_nonlinear: Option<Vec<Complex64>>,
}

impl Stepper {
    pub fn new(
        grid: &Arc<SpectralGrid>,
        symbol: &LinearSymbol,
        model: FluxModel,
        u_tilde: f64,
        dt: f64,
        scheme: Scheme,
    ) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        if symbol.values().len() != grid.n_modes() {
            return Err(Error::InvalidArgument("symbol does not match grid".into()));
        }
        let nyq = grid.nyquist_index();
        let lam = symbol.values();
        let coeffs = match scheme {
            Scheme::Etdrk4 => {
                let n = lam.len();
                let mut c: [Vec<Complex64>; 6] = std::array::from_fn(|_| vec![Complex64::default(); n]);
                for (i, &l) in lam.iter().enumerate() {
                    if i == nyq {
                        continue;
                    }
                    let [e, p1, p2, p3] = phi_functions(l, dt);
                    let [e2, h1, _, _] = phi_functions(l, 0.5 * dt);
                    c[0][i] = e;
                    c[1][i] = e2;
                    c[2][i] = h1 * (0.5 * dt);
                    c[3][i] = (p1 - p2 * 3.0 + p3 * 4.0) * dt;
                    c[4][i] = (p2 - p3 * 2.0) * dt;
                    c[5][i] = (p3 * 4.0 - p2) * dt;
                }
                let [e, e2, q, f1, f2, f3] = c;
                Coefficients::Etdrk4 { e, e2, q, f1, f2, f3 }
            }
            Scheme::ImexCnab2 => {
                let half = 0.5 * dt;
                let mut explicit: Vec<Complex64> = lam.iter().map(|&l| 1.0 + l * half).collect();
                let inv_implicit = lam.iter().map(|&l| 1.0 / (1.0 - l * half)).collect();
                explicit[nyq] = Complex64::default();
                Coefficients::Imex { explicit, inv_implicit }
            }
        };
        let n = grid.n_modes();
        Ok(Self {
            grid: grid.clone(),
            model,
            u_tilde,
            dt,
            coeffs,
            work: NonlinearWork::new(grid),
            stages: std::array::from_fn(|_| vec![Complex64::default(); n]),
            prev_nonlinear: None,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn scheme(&self) -> Scheme {
        match self.coeffs {
            Coefficients::Etdrk4 { .. } => Scheme::Etdrk4,
            Coefficients::Imex { .. } => Scheme::ImexCnab2,
        }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    /// `N` at the previous step, carried by the two-step scheme.
    pub fn prev_nonlinear(&self) -> Option<&[Complex64]> {
        self.prev_nonlinear.as_deref()
    }

    pub fn set_prev_nonlinear(&mut self, prev: Option<Vec<Complex64>>) {
        self.prev_nonlinear = prev;
    }

    /// Advances `state` (spectral, FFT order) by one step. The blow-up error
    /// carries `t = NaN`; callers substitute the current time.
    pub fn step(&mut self, state: &mut [Complex64]) -> Result<()> {
        let Self {
            grid,
            model,
            u_tilde,
            dt,
            coeffs,
            work,
            stages,
            prev_nonlinear,
        } = self;
        let (g, m, ut) = (&**grid, &*model, *u_tilde);
        match coeffs {
            Coefficients::Etdrk4 { e, e2, q, f1, f2, f3 } => {
                let [nu, a, na, b, nb, c, nc] = stages;
                work.evaluate(g, m, ut, state, nu)?;
                for i in 0..state.len() {
                    a[i] = e2[i] * state[i] + q[i] * nu[i];
                }
                work.evaluate(g, m, ut, a, na)?;
                for i in 0..state.len() {
                    b[i] = e2[i] * state[i] + q[i] * na[i];
                }
                work.evaluate(g, m, ut, b, nb)?;
                for i in 0..state.len() {
                    c[i] = e2[i] * a[i] + q[i] * (nb[i] * 2.0 - nu[i]);
                }
                work.evaluate(g, m, ut, c, nc)?;
                for i in 0..state.len() {
                    state[i] = e[i] * state[i] + f1[i] * nu[i] + f2[i] * (na[i] + nb[i]) * 2.0 + f3[i] * nc[i];
                }
            }
            Coefficients::Imex { explicit, inv_implicit } => {
                let n_now = &mut stages[0];
                work.evaluate(g, m, ut, state, n_now)?;
                let h = *dt;
                match prev_nonlinear {
                    None => {
                        for i in 0..state.len() {
                            state[i] = (explicit[i] * state[i] + n_now[i] * h) * inv_implicit[i];
                        }
                        *prev_nonlinear = Some(n_now.clone());
                    }
                    Some(prev) => {
                        for i in 0..state.len() {
                            let ab = (n_now[i] * 3.0 - prev[i]) * (0.5 * h);
                            state[i] = (explicit[i] * state[i] + ab) * inv_implicit[i];
                        }
                        prev.copy_from_slice(n_now);
                    }
                }
            }
        }
        if let Some(i) = state.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::BlowUp {
                t: f64::NAN,
                detail: format!(
                    "nonfinite spectral coefficient at mode {}; refine the grid or the time step",
                    grid.mode(i)
                ),
            });
        }
        Ok(())
    }
}

/// One ETDRK4 step of `psi`.
pub fn step_etdrk4(psi: &Field, symbol: &LinearSymbol, model: &FluxModel, u_tilde: f64, dt: f64) -> Result<Field> {
    let grid = psi.grid();
    let mut stepper = Stepper::new(grid, symbol, model.clone(), u_tilde, dt, Scheme::Etdrk4)?;
    let mut state = psi.spectral().into_owned();
    stepper.step(&mut state)?;
    Ok(Field::from_spectral(grid, state))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::integrator::build_symbol;
    use crate::spectral::make_grid;

    fn single_mode(n: usize, j: i64) -> Field {
        let g = make_grid(n, 2.0 * PI).unwrap();
        let mut hat = vec![Complex64::default(); n];
        hat[g.index_of_mode(j).unwrap()] = Complex64::new(0.3, -0.2);
        hat[g.index_of_mode(-j).unwrap()] = Complex64::new(0.3, 0.2);
        Field::from_spectral(&g, hat)
    }

    #[test]
    fn linear_step_is_exact() {
        let psi = single_mode(64, 5);
        let sym = build_symbol(psi.grid(), 1.0, 0.05).unwrap();
        let dt = 0.01;
        let out = step_etdrk4(&psi, &sym, &FluxModel::zero(), 0.0, dt).unwrap();
        for (i, (o, p)) in out.spectral().iter().zip(psi.spectral().iter()).enumerate() {
            let want = (sym.values()[i] * dt).exp() * p;
            assert!((o - want).norm() <= 1e-14, "mode {i}");
        }
    }

    #[test]
    fn zero_is_fixed_point() {
        let g = make_grid(32, 3.0).unwrap();
        let sym = build_symbol(&g, 1.0, 0.1).unwrap();
        for scheme in [Scheme::Etdrk4, Scheme::ImexCnab2] {
            let mut st = Stepper::new(&g, &sym, FluxModel::burgers(), 0.7, 0.01, scheme).unwrap();
            let mut state = vec![Complex64::default(); 32];
            for _ in 0..5 {
                st.step(&mut state).unwrap();
            }
            assert!(state.iter().all(|c| *c == Complex64::default()));
        }
    }

    #[test]
    fn mass_mode_untouched() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let psi = Field::from_fn(&g, |x| 0.25 + 0.5 * x.sin() + 0.2 * (2.0 * x).cos());
        let sym = build_symbol(&g, 0.5, 0.1).unwrap();
        let mut st = Stepper::new(&g, &sym, FluxModel::burgers(), 1.0, 1e-2, Scheme::Etdrk4).unwrap();
        let mut state = psi.spectral().into_owned();
        for _ in 0..100 {
            st.step(&mut state).unwrap();
        }
        assert!((state[0].re - 0.25).abs() <= 1e-12 && state[0].im.abs() <= 1e-12);
    }

    fn burgers_final(dt: f64, scheme: Scheme) -> Vec<Complex64> {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let psi = Field::from_fn(&g, |x| 0.4 * x.sin() + 0.1 * (2.0 * x).cos());
        let sym = build_symbol(&g, 1.0, 0.05).unwrap();
        let mut st = Stepper::new(&g, &sym, FluxModel::burgers(), 0.0, dt, scheme).unwrap();
        let mut state = psi.spectral().into_owned();
        for _ in 0..(1.0 / dt).round() as usize {
            st.step(&mut state).unwrap();
        }
        state
    }

    fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn etdrk4_self_convergence_order() {
        let dt = 0.1;
        let (u1, u2, u3) = (
            burgers_final(dt, Scheme::Etdrk4),
            burgers_final(dt / 2.0, Scheme::Etdrk4),
            burgers_final(dt / 4.0, Scheme::Etdrk4),
        );
        let order = (dist(&u1, &u2) / dist(&u2, &u3)).log2();
        assert!((3.5..=4.5).contains(&order), "order {order}");
    }

    #[test]
    fn imex_is_second_order() {
        let dt = 0.01;
        let (u1, u2, u3) = (
            burgers_final(dt, Scheme::ImexCnab2),
            burgers_final(dt / 2.0, Scheme::ImexCnab2),
            burgers_final(dt / 4.0, Scheme::ImexCnab2),
        );
        let order = (dist(&u1, &u2) / dist(&u2, &u3)).log2();
        assert!((1.7..=2.3).contains(&order), "order {order}");
    }

    #[test]
    fn blow_up_detected() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let sym = build_symbol(&g, 0.0, 0.0).unwrap();
        let model = FluxModel::parse("powerlaw:5", 5.0).unwrap();
        let psi = Field::from_fn(&g, |x| 1e80 * x.sin());
        let err = step_etdrk4(&psi, &sym, &model, 0.0, 0.1).unwrap_err();
        assert!(matches!(err, Error::BlowUp { .. }));
    }
}
