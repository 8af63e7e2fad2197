use serde::{Deserialize, Serialize};

use super::inequalities::interpolation_suite_from_norms;
use crate::error::{Error, Result};
use crate::flux::{nonlinear_term, FluxModel};
use crate::spectral::{derivative, inner_product, norms_with_refinement, Field, NormBundle};

/// Largest values seen so far.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct RunningSuprema {
    pub h2_norm: f64,
    pub sup_psi: f64,
    pub sup_dpsi: f64,
}

impl RunningSuprema {
    fn of(n: &NormBundle) -> Self {
        Self {
            h2_norm: n.h2_total(),
            sup_psi: n.sup_psi,
            sup_dpsi: n.sup_dpsi,
        }
    }

    fn merge(&self, n: &NormBundle) -> Self {
        Self {
            h2_norm: self.h2_norm.max(n.h2_total()),
            sup_psi: self.sup_psi.max(n.sup_psi),
            sup_dpsi: self.sup_dpsi.max(n.sup_dpsi),
        }
    }
}

/// Ledger entry for one snapshot. Every time integral is accumulated by the
/// trapezoid rule on the snapshot times, so a record carries everything the
/// next update needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub norms: NormBundle,
    /// `‖ψ₀‖²`.
    pub initial_l2_sq: f64,
    /// `D(t) ≈ 2ν ∫₀ᵗ ‖∂ₓ²ψ‖² dτ`.
    pub dissipation_integral: f64,
    /// `R(t) = ‖ψ(t)‖² + D(t) − ‖ψ₀‖²`.
    pub energy_residual: f64,
    /// Trapezoidal residual of the `‖∂ₓ²ψ‖²` balance over the last snapshot
    /// interval; zero on the first record.
    pub h2_balance_residual: f64,
    /// `2ν‖∂ₓ⁴ψ‖² + 2⟨∂ₓ⁴ψ, ∂ₓ f(ψ+ũ)⟩` at `t`.
    pub h2_rate_terms: f64,
    /// `∫₀ᵗ (sup|ψ|)⁸ dτ`.
    pub apriori_int8: f64,
    /// `∫₀ᵗ (sup|∂ₓψ|)^{8/3} dτ`.
    pub apriori_int83: f64,
    pub h3_integral: f64,
    pub h4_integral: f64,
    pub running: RunningSuprema,
    /// Smallest slack factor of the interpolation suite; `None` for the zero
    /// field.
    pub min_interpolation_slack: Option<f64>,
    pub interpolation_holds: bool,
}

/// Parameters shared by every ledger update of one run.
#[derive(Debug, Clone)]
pub struct DiagnosticsContext {
    pub nu: f64,
    pub model: FluxModel,
    pub u_tilde: f64,
    pub refinement: usize,
    pub tolerance: f64,
    pub epsilon: f64,
}

impl DiagnosticsContext {
    pub fn new(nu: f64, model: FluxModel, u_tilde: f64) -> Self {
        Self {
            nu,
            model,
            u_tilde,
            refinement: crate::spectral::SUP_REFINEMENT,
            tolerance: 1e-3,
            epsilon: 1e-300,
        }
    }

    pub fn initial_record(&self, psi: &Field) -> Result<DiagnosticsRecord> {
        let n = self.checked_norms(psi, 0.0)?;
        let (_, b) = h2_terms(psi, &n, self.nu, &self.model, self.u_tilde)?;
        let (slack, holds) = self.interpolation(&n);
        Ok(DiagnosticsRecord {
            t: 0.0,
            norms: n,
            initial_l2_sq: n.l2 * n.l2,
            dissipation_integral: 0.0,
            energy_residual: 0.0,
            h2_balance_residual: 0.0,
            h2_rate_terms: b,
            apriori_int8: 0.0,
            apriori_int83: 0.0,
            h3_integral: 0.0,
            h4_integral: 0.0,
            running: RunningSuprema::of(&n),
            min_interpolation_slack: slack,
            interpolation_holds: holds,
        })
    }

    /// Full ledger update for the snapshot `psi` at time `t`.
    pub fn advance(&self, prev: &DiagnosticsRecord, psi: &Field, t: f64) -> Result<DiagnosticsRecord> {
        let dt = check_order(prev.t, t)?;
        let n = self.checked_norms(psi, t)?;
        let (a, b) = h2_terms(psi, &n, self.nu, &self.model, self.u_tilde)?;
        let (d, r) = energy_step(prev, &n, self.nu, dt);
        let acc = apriori_step(prev, &n, dt);
        let a_prev = prev.norms.seminorm_2().powi(2);
        let (slack, holds) = self.interpolation(&n);
        Ok(DiagnosticsRecord {
            t,
            norms: n,
            initial_l2_sq: prev.initial_l2_sq,
            dissipation_integral: d,
            energy_residual: r,
            h2_balance_residual: ((a - a_prev) / dt + 0.5 * (b + prev.h2_rate_terms)).abs(),
            h2_rate_terms: b,
            apriori_int8: acc[0],
            apriori_int83: acc[1],
            h3_integral: acc[2],
            h4_integral: acc[3],
            running: prev.running.merge(&n),
            min_interpolation_slack: slack,
            interpolation_holds: holds,
        })
    }

    fn checked_norms(&self, psi: &Field, t: f64) -> Result<NormBundle> {
        let n = norms_with_refinement(psi, self.refinement)?;
        let finite = n.l2.is_finite() && n.seminorm.iter().all(|v| v.is_finite()) && n.sup_dpsi.is_finite();
        if !finite {
            return Err(Error::BlowUp {
                t,
                detail: "nonfinite norms in diagnostics".into(),
            });
        }
        Ok(n)
    }

    fn interpolation(&self, n: &NormBundle) -> (Option<f64>, bool) {
        let reports = interpolation_suite_from_norms(n, self.tolerance, self.epsilon);
        let holds = reports.iter().all(|r| r.holds);
        let slack = reports
            .iter()
            .map(|r| r.slack_factor)
            .filter(|s| s.is_finite())
            .reduce(f64::min);
        (slack, holds)
    }
}

fn check_order(previous: f64, t: f64) -> Result<f64> {
    let dt = t - previous;
    if !(dt > 0.0) {
        return Err(Error::OutOfOrder { t, previous });
    }
    Ok(dt)
}

fn energy_step(prev: &DiagnosticsRecord, n: &NormBundle, nu: f64, dt: f64) -> (f64, f64) {
    let g_prev = 2.0 * nu * prev.norms.seminorm_2().powi(2);
    let g_now = 2.0 * nu * n.seminorm_2().powi(2);
    let d = prev.dissipation_integral + 0.5 * dt * (g_prev + g_now);
    (d, n.l2 * n.l2 + d - prev.initial_l2_sq)
}

fn apriori_integrands(n: &NormBundle) -> [f64; 4] {
    [
        n.sup_psi.powi(8),
        n.sup_dpsi.powf(8.0 / 3.0),
        n.seminorm_3().powi(2),
        n.seminorm_4().powi(2),
    ]
}

fn apriori_step(prev: &DiagnosticsRecord, n: &NormBundle, dt: f64) -> [f64; 4] {
    let before = [prev.apriori_int8, prev.apriori_int83, prev.h3_integral, prev.h4_integral];
    let g0 = apriori_integrands(&prev.norms);
    let g1 = apriori_integrands(n);
    std::array::from_fn(|i| before[i] + 0.5 * dt * (g0[i] + g1[i]))
}

/// `(‖∂ₓ²ψ‖², 2ν‖∂ₓ⁴ψ‖² + 2⟨∂ₓ⁴ψ, ∂ₓ f(ψ+ũ)⟩)` with the dealiased flux
/// derivative used by the solver.
fn h2_terms(psi: &Field, n: &NormBundle, nu: f64, model: &FluxModel, u_tilde: f64) -> Result<(f64, f64)> {
    let a = n.seminorm_2().powi(2);
    let d4 = derivative(psi, 4)?;
    // nonlinear_term is -∂ₓ D f
    let transfer = -inner_product(&d4, &nonlinear_term(psi, model, u_tilde)?);
    Ok((a, 2.0 * nu * n.seminorm_4().powi(2) + 2.0 * transfer))
}

/// Advances `D(t)` and `R(t)` to the snapshot `psi` taken `dt_since_last`
/// after `record`. Other accumulators are carried over unchanged.
pub fn energy_ledger_update(
    record: &DiagnosticsRecord,
    psi: &Field,
    nu: f64,
    dt_since_last: f64,
) -> Result<DiagnosticsRecord> {
    let t = record.t + dt_since_last;
    check_order(record.t, t)?;
    let n = crate::spectral::norms(psi);
    let (d, r) = energy_step(record, &n, nu, dt_since_last);
    Ok(DiagnosticsRecord {
        t,
        norms: n,
        dissipation_integral: d,
        energy_residual: r,
        ..record.clone()
    })
}

/// Advances the a-priori integrals and running suprema.
pub fn apriori_update(record: &DiagnosticsRecord, psi: &Field, dt_since_last: f64) -> Result<DiagnosticsRecord> {
    let t = record.t + dt_since_last;
    check_order(record.t, t)?;
    let n = crate::spectral::norms(psi);
    let acc = apriori_step(record, &n, dt_since_last);
    Ok(DiagnosticsRecord {
        t,
        norms: n,
        apriori_int8: acc[0],
        apriori_int83: acc[1],
        h3_integral: acc[2],
        h4_integral: acc[3],
        running: record.running.merge(&n),
        ..record.clone()
    })
}

/// Residual of `d/dt‖∂ₓ²ψ‖² + 2ν‖∂ₓ⁴ψ‖² + 2⟨∂ₓ⁴ψ, ∂ₓ f(ψ+ũ)⟩ = 0` between two
/// snapshots `dt` apart: difference quotient against the trapezoidal mean of
/// the right-hand terms. Pure quadrature error for an exact solution.
pub fn h2_energy_balance(
    psi: &Field,
    psi_prev: &Field,
    dt: f64,
    nu: f64,
    model: &FluxModel,
    u_tilde: f64,
) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("snapshot spacing must be positive, got {dt}")));
    }
    let n1 = crate::spectral::norms(psi);
    let n0 = crate::spectral::norms(psi_prev);
    let (a1, b1) = h2_terms(psi, &n1, nu, model, u_tilde)?;
    let (a0, b0) = h2_terms(psi_prev, &n0, nu, model, u_tilde)?;
    Ok(((a1 - a0) / dt + 0.5 * (b1 + b0)).abs())
}

/// Recomputes `R(t)` for every record from the stored norms alone.
pub fn recompute_energy_residuals(history: &[DiagnosticsRecord], nu: f64) -> Vec<f64> {
    let Some(first) = history.first() else {
        return Vec::new();
    };
    let e0 = first.initial_l2_sq;
    let mut d = first.dissipation_integral;
    let mut out = vec![first.norms.l2 * first.norms.l2 + d - e0];
    for w in history.windows(2) {
        let g0 = 2.0 * nu * w[0].norms.seminorm_2().powi(2);
        let g1 = 2.0 * nu * w[1].norms.seminorm_2().powi(2);
        d += 0.5 * (w[1].t - w[0].t) * (g0 + g1);
        out.push(w[1].norms.l2 * w[1].norms.l2 + d - e0);
    }
    out
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::make_grid;

    /// a·sin(kx)·e^{-νk⁴t}, the f ≡ 0, δ = 0 solution (δ only shifts phase).
    fn decaying_mode(a: f64, k: f64, nu: f64, t: f64) -> Field {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let damp = (-nu * k.powi(4) * t).exp();
        Field::from_fn(&g, |x| a * damp * (k * x).sin())
    }

    #[test]
    fn energy_identity_closed_form() {
        let (a, k, nu) = (0.8, 2.0, 0.05);
        let dt = 1e-3;
        let ctx = DiagnosticsContext::new(nu, FluxModel::zero(), 0.0);
        let mut rec = ctx.initial_record(&decaying_mode(a, k, nu, 0.0)).unwrap();
        let e0 = a * a * PI;
        for i in 1..=500 {
            let t = i as f64 * dt;
            rec = energy_ledger_update(&rec, &decaying_mode(a, k, nu, t), nu, dt).unwrap();
            let d_exact = e0 * (1.0 - (-2.0 * nu * k.powi(4) * t).exp());
            // trapezoid error: t·dt²/12·max|g''|, g'' = e0(2νk⁴)³e^{...}
            let bound = t * dt * dt / 12.0 * e0 * (2.0 * nu * k.powi(4)).powi(3) + 1e-13;
            assert!((rec.dissipation_integral - d_exact).abs() <= bound);
            assert!(rec.energy_residual.abs() <= bound);
        }
    }

    #[test]
    fn inviscid_and_zero_cases() {
        let ctx = DiagnosticsContext::new(0.0, FluxModel::zero(), 0.0);
        let rec = ctx.initial_record(&decaying_mode(0.5, 3.0, 0.0, 0.0)).unwrap();
        let next = energy_ledger_update(&rec, &decaying_mode(0.4, 3.0, 0.0, 0.0), 0.0, 0.1).unwrap();
        assert_eq!(next.dissipation_integral, 0.0);
        let want = next.norms.l2.powi(2) - rec.norms.l2.powi(2);
        assert!((next.energy_residual - want).abs() < 1e-15);

        let g = make_grid(32, 1.0).unwrap();
        let z = Field::zeros(&g);
        let ctx = DiagnosticsContext::new(0.3, FluxModel::burgers(), 1.0);
        let mut rec = ctx.initial_record(&z).unwrap();
        for i in 1..5 {
            rec = ctx.advance(&rec, &z, i as f64 * 0.1).unwrap();
            assert_eq!(rec.energy_residual, 0.0);
            assert_eq!(rec.apriori_int8, 0.0);
            assert_eq!(rec.apriori_int83, 0.0);
            assert_eq!(rec.h2_balance_residual, 0.0);
            assert!(rec.interpolation_holds);
        }
    }

    #[test]
    fn rejects_out_of_order() {
        let ctx = DiagnosticsContext::new(0.1, FluxModel::zero(), 0.0);
        let f = decaying_mode(0.5, 1.0, 0.1, 0.0);
        let rec = ctx.initial_record(&f).unwrap();
        let later = ctx.advance(&rec, &f, 1.0).unwrap();
        assert!(matches!(ctx.advance(&later, &f, 0.5), Err(Error::OutOfOrder { .. })));
        assert!(energy_ledger_update(&rec, &f, 0.1, 0.0).is_err());
        assert!(apriori_update(&rec, &f, -1.0).is_err());
    }

    #[test]
    fn apriori_closed_form() {
        let (a, k, nu) = (0.9, 1.0, 0.5);
        let dt = 2e-3;
        let mut rec = DiagnosticsContext::new(nu, FluxModel::zero(), 0.0)
            .initial_record(&decaying_mode(a, k, nu, 0.0))
            .unwrap();
        let steps = 5000;
        for i in 1..=steps {
            rec = apriori_update(&rec, &decaying_mode(a, k, nu, i as f64 * dt), dt).unwrap();
        }
        let t = steps as f64 * dt;
        let lam = 8.0 * nu * k.powi(4);
        let exact = a.powi(8) / lam * (1.0 - (-lam * t).exp());
        assert!((rec.apriori_int8 - exact).abs() <= 1e-5 * exact);
        assert!(rec.running.sup_psi >= a - 1e-12);
    }

    #[test]
    fn h2_balance_single_mode() {
        let (a, k, nu) = (1.0, 2.0, 0.02);
        let dt = 1e-2;
        let r = h2_energy_balance(
            &decaying_mode(a, k, nu, 0.3 + dt),
            &decaying_mode(a, k, nu, 0.3),
            dt,
            nu,
            &FluxModel::zero(),
            0.0,
        )
        .unwrap();
        let e0 = a * a * PI;
        assert!(r <= 1e-6 * k.powi(8) * e0, "{r}");
        let g = make_grid(16, 1.0).unwrap();
        let z = Field::zeros(&g);
        assert_eq!(h2_energy_balance(&z, &z, 0.1, 0.1, &FluxModel::burgers(), 0.5).unwrap(), 0.0);
    }

    #[test]
    fn recompute_matches_incremental() {
        let nu = 0.02;
        let ctx = DiagnosticsContext::new(nu, FluxModel::zero(), 0.0);
        let mut hist = vec![ctx.initial_record(&decaying_mode(0.7, 3.0, nu, 0.0)).unwrap()];
        let mut t = 0.0;
        for i in 1..40 {
            t += 0.01 * (1 + i % 3) as f64;
            let next = ctx.advance(hist.last().unwrap(), &decaying_mode(0.7, 3.0, nu, t), t).unwrap();
            hist.push(next);
        }
        for (r, rec) in recompute_energy_residuals(&hist, nu).iter().zip(&hist) {
            assert!((r - rec.energy_residual).abs() <= 1e-12);
        }
    }
}
