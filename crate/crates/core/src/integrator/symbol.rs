use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::SpectralGrid;

/// Fourier symbol `λ_j = iδk_j³ − νk_j⁴` of `−δ∂ₓ³ − ν∂ₓ⁴`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSymbol {
    delta: f64,
    nu: f64,
    values: Vec<Complex64>,
}

pub fn build_symbol(grid: &SpectralGrid, delta: f64, nu: f64) -> Result<LinearSymbol> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "nu = {nu} violates the dissipation hypothesis nu >= 0"
        )));
    }
    if !delta.is_finite() {
        return Err(Error::InvalidArgument(format!("delta = {delta} is not finite")));
    }
    let values = grid.wavenumbers().iter().map(|&k| symbol_at(k, delta, nu)).collect();
    Ok(LinearSymbol { delta, nu, values })
}

pub(crate) fn symbol_at(k: f64, delta: f64, nu: f64) -> Complex64 {
    let k2 = k * k;
    Complex64::new(-nu * k2 * k2, delta * k2 * k)
}

impl LinearSymbol {
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Per-mode values in FFT order.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}
