//! Per-snapshot ledger of norms, identity residuals, interpolation
//! inequalities and accumulated time integrals.

mod decay;
mod inequalities;
mod record;

use std::io::Write;

pub use decay::{decay_report, DecayReport, L2_MONOTONE_SLACK};
pub use inequalities::{interpolation_suite, interpolation_suite_from_norms, InequalityReport, INEQUALITY_NAMES};
pub use record::{
    apriori_update, energy_ledger_update, h2_energy_balance, recompute_energy_residuals, DiagnosticsContext,
    DiagnosticsRecord, RunningSuprema,
};

pub const CSV_HEADER: &str =
    "t,l2,h1_semi,h2_semi,sup_psi,sup_dpsi,mean,D,R,h2_balance_residual,apriori_int8,apriori_int83";

/// One CSV row per record, 17 significant digits.
pub fn write_csv<W: Write>(mut out: W, records: &[DiagnosticsRecord]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        let row = [
            r.t,
            r.norms.l2,
            r.norms.seminorm_1(),
            r.norms.seminorm_2(),
            r.norms.sup_psi,
            r.norms.sup_dpsi,
            r.norms.mean,
            r.dissipation_integral,
            r.energy_residual,
            r.h2_balance_residual,
            r.apriori_int8,
            r.apriori_int83,
        ];
        let line = row.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(",");
        writeln!(out, "{line}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::flux::FluxModel;
    use crate::spectral::{make_grid, Field};

    fn history(nu: f64, k: f64, steps: usize, dt: f64) -> Vec<DiagnosticsRecord> {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let ctx = DiagnosticsContext::new(nu, FluxModel::zero(), 0.0);
        let field = |t: f64| Field::from_fn(&g, |x| (-nu * k.powi(4) * t).exp() * (k * x).sin());
        let mut out = vec![ctx.initial_record(&field(0.0)).unwrap()];
        for i in 1..=steps {
            let t = i as f64 * dt;
            out.push(ctx.advance(out.last().unwrap(), &field(t), t).unwrap());
        }
        out
    }

    #[test]
    fn csv_layout() {
        let h = history(0.1, 1.0, 2, 0.5);
        let mut buf = Vec::new();
        write_csv(&mut buf, &h).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(first.len(), 12);
        assert_eq!(first[1], h[0].norms.l2);
        assert!(lines[2].starts_with("5.0000000000000000e-1,"));
    }

    #[test]
    fn decay_linear_bound() {
        let (nu, k, t_end) = (0.1, 1.0, 30.0);
        let h = history(nu, k, 60, t_end / 60.0);
        let r = decay_report(&h, 0.1).unwrap();
        let bound = (-nu * k.powi(4) * t_end).exp() + 1e-9;
        assert!(r.l2_monotone());
        assert!(r.sup_psi_ratio <= bound && r.sup_dpsi_ratio <= bound && r.h1_ratio <= bound);
        assert!(r.sup_psi_below.is_some());
    }

    #[test]
    fn decay_degenerate_cases() {
        let g = make_grid(16, 1.0).unwrap();
        let ctx = DiagnosticsContext::new(0.1, FluxModel::burgers(), 0.0);
        let z = Field::zeros(&g);
        let mut h = vec![ctx.initial_record(&z).unwrap()];
        for i in 1..12 {
            h.push(ctx.advance(h.last().unwrap(), &z, i as f64).unwrap());
        }
        let r = decay_report(&h, 0.1).unwrap();
        assert_eq!((r.sup_psi_ratio, r.sup_dpsi_ratio, r.h1_ratio), (0.0, 0.0, 0.0));
        assert!(decay_report(&h[..9], 0.1).is_err());
    }

    #[test]
    fn monotonicity_violation_detected() {
        let mut h = history(0.1, 1.0, 12, 0.1);
        h[7].norms.l2 = h[2].norms.l2 + 1e-6;
        let r = decay_report(&h, 0.1).unwrap();
        assert_eq!(r.l2_monotonicity_violations, vec![h[7].t]);
    }
}
