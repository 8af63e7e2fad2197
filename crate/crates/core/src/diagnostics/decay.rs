use serde::Serialize;

use super::record::DiagnosticsRecord;
use crate::error::{Error, Result};

/// Slack allowed on `‖ψ‖_{L²}` monotonicity.
pub const L2_MONOTONE_SLACK: f64 = 1e-10;

/// Decay of the deviation toward zero over a recorded history.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    /// Times `t₂` at which `‖ψ(t₂)‖` exceeded an earlier value by more than
    /// the slack.
    pub l2_monotonicity_violations: Vec<f64>,
    pub sup_psi_ratio: f64,
    pub sup_dpsi_ratio: f64,
    pub h1_ratio: f64,
    pub threshold: f64,
    /// First time each quantity fell to `threshold ×` its initial value.
    pub sup_psi_below: Option<f64>,
    pub sup_dpsi_below: Option<f64>,
    pub h1_below: Option<f64>,
}

impl DecayReport {
    pub fn l2_monotone(&self) -> bool {
        self.l2_monotonicity_violations.is_empty()
    }
}

/// Summarises decay; ratios of a quantity that starts at zero are 0.
pub fn decay_report(history: &[DiagnosticsRecord], threshold: f64) -> Result<DecayReport> {
    if history.len() < 10 {
        return Err(Error::InvalidArgument(format!(
            "decay report needs at least 10 records, got {}",
            history.len()
        )));
    }
    let mut violations = Vec::new();
    let mut min_so_far = f64::INFINITY;
    for r in history {
        if r.norms.l2 > min_so_far + L2_MONOTONE_SLACK {
            violations.push(r.t);
        }
        min_so_far = min_so_far.min(r.norms.l2);
    }

    let first = &history[0];
    let last = &history[history.len() - 1];
    let ratio = |f: fn(&DiagnosticsRecord) -> f64| {
        let v0 = f(first);
        if v0 == 0.0 {
            0.0
        } else {
            f(last) / v0
        }
    };
    let below = |f: fn(&DiagnosticsRecord) -> f64| {
        let v0 = f(first);
        history.iter().find(|r| f(r) <= threshold * v0).map(|r| r.t)
    };
    let sup_psi: fn(&DiagnosticsRecord) -> f64 = |r| r.norms.sup_psi;
    let sup_dpsi: fn(&DiagnosticsRecord) -> f64 = |r| r.norms.sup_dpsi;
    let h1: fn(&DiagnosticsRecord) -> f64 = |r| r.norms.seminorm_1();

    Ok(DecayReport {
        l2_monotonicity_violations: violations,
        sup_psi_ratio: ratio(sup_psi),
        sup_dpsi_ratio: ratio(sup_dpsi),
        h1_ratio: ratio(h1),
        threshold,
        sup_psi_below: below(sup_psi),
        sup_dpsi_below: below(sup_dpsi),
        h1_below: below(h1),
    })
}
