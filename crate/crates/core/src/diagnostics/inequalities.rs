use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::spectral::{norms, Field, NormBundle};

/// One checked inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs·(1+tol) / max(lhs, ε)`; at least 1 when the inequality holds.
    /// Infinite for the zero field.
    pub slack_factor: f64,
    pub holds: bool,
}

impl InequalityReport {
    fn new(name: &'static str, lhs: f64, rhs: f64, tol: f64, eps: f64) -> Self {
        Self {
            name,
            lhs,
            rhs,
            slack_factor: rhs * (1.0 + tol) / lhs.max(eps),
            holds: lhs <= rhs * (1.0 + tol),
        }
    }

    fn trivial(name: &'static str) -> Self {
        Self {
            name,
            lhs: 0.0,
            rhs: 0.0,
            slack_factor: f64::INFINITY,
            holds: true,
        }
    }
}

pub const INEQUALITY_NAMES: [&str; 4] = [
    "sup_psi_by_l2_h1",
    "sup_psi_by_l2_h2",
    "sup_dpsi_by_h1_h2",
    "h1_by_l2_h2",
];

/// Checks, with sup norms from the 4× refined grid,
///
/// * (a) `sup|ψ|  <= √2 ‖ψ‖^{1/2} ‖∂ₓψ‖^{1/2}`
/// * (b) `sup|ψ|  <= √2 ‖ψ‖^{3/4} ‖∂ₓ²ψ‖^{1/4}`
/// * (c) `sup|∂ₓψ| <= √2 ‖∂ₓψ‖^{1/2} ‖∂ₓ²ψ‖^{1/2}`
/// * (d) `‖∂ₓψ‖² <= ‖ψ‖ ‖∂ₓ²ψ‖`
///
/// On the torus (a) and (b) need ψ to vanish somewhere, e.g. zero mean.
pub fn interpolation_suite(psi: &Field, tol: f64, eps: f64) -> Vec<InequalityReport> {
    interpolation_suite_from_norms(&norms(psi), tol, eps)
}

pub fn interpolation_suite_from_norms(n: &NormBundle, tol: f64, eps: f64) -> Vec<InequalityReport> {
    let (l2, h1, h2) = (n.l2, n.seminorm_1(), n.seminorm_2());
    if l2 == 0.0 && n.sup_psi == 0.0 {
        return INEQUALITY_NAMES.iter().map(|&name| InequalityReport::trivial(name)).collect();
    }
    vec![
        InequalityReport::new(INEQUALITY_NAMES[0], n.sup_psi, SQRT_2 * (l2 * h1).sqrt(), tol, eps),
        InequalityReport::new(
            INEQUALITY_NAMES[1],
            n.sup_psi,
            SQRT_2 * l2.powf(0.75) * h2.powf(0.25),
            tol,
            eps,
        ),
        InequalityReport::new(INEQUALITY_NAMES[2], n.sup_dpsi, SQRT_2 * (h1 * h2).sqrt(), tol, eps),
        InequalityReport::new(INEQUALITY_NAMES[3], h1 * h1, l2 * h2, tol, eps),
    ]
}
