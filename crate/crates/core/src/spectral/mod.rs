//! Periodic Fourier discretization.
//!
//! Transforms, exact spectral differentiation, 2/3-rule dealiasing,
//! sup norms on zero-padded refined grids, and Parseval norms.

mod field;
mod grid;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use field::Field;
pub use grid::{make_grid, SpectralGrid, REFINEMENT_FACTORS};

use crate::error::{Error, Result};

/// Refinement factor used for every sup norm in the diagnostics.
pub const SUP_REFINEMENT: usize = 4;

/// Multiplier `(i k)^m` of the m-th derivative.
pub fn derivative_symbol(k: f64, m: u32) -> Complex64 {
    match m % 4 {
        0 => Complex64::new(k.powi(m as i32), 0.0),
        1 => Complex64::new(0.0, k.powi(m as i32)),
        2 => Complex64::new(-k.powi(m as i32), 0.0),
        _ => Complex64::new(0.0, -k.powi(m as i32)),
    }
}

/// m-th spatial derivative, `1 <= m <= 4`.
///
/// The Nyquist coefficient is dropped for odd `m`: its derivative is not
/// a real field.
pub fn derivative(field: &Field, m: u32) -> Result<Field> {
    if !(1..=4).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "derivative order must be in 1..=4, got {m}"
        )));
    }
    let grid = field.grid();
    let nyquist = grid.nyquist_index();
    let k = grid.wavenumbers();
    Ok(field.map_spectral(|i, c| {
        if m % 2 == 1 && i == nyquist {
            Complex64::default()
        } else {
            c * derivative_symbol(k[i], m)
        }
    }))
}

/// Zeroes every coefficient with `|j| > N/3`.
pub fn dealias(field: &Field) -> Field {
    let mask = field.grid().dealias_mask();
    field.map_spectral(|i, c| if mask[i] { c } else { Complex64::default() })
}

/// Maximum of `|ψ|` over the `factor·N` grid obtained by zero-padding the
/// spectrum. `factor` must be one of 1, 2, 4, 8.
pub fn sup_norm_refined(field: &Field, factor: usize) -> Result<f64> {
    let grid = field.grid();
    let plan = grid.refined_inverse(factor)?;
    if factor == 1 {
        return Ok(max_abs(&field.nodal()));
    }
    let n = grid.n_modes();
    let m = factor * n;
    let half = n / 2;
    let spec = field.spectral();
    let mut buf = vec![Complex64::default(); m];
    buf[..half].copy_from_slice(&spec[..half]);
    buf[m - half + 1..].copy_from_slice(&spec[half + 1..]);
    // Split the Nyquist coefficient between ±N/2 so the padded interpolant
    // stays real.
    let nyq = spec[half] * 0.5;
    buf[half] = nyq;
    buf[m - half] = nyq;
    let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
    plan.process_with_scratch(&mut buf, &mut scratch);
    Ok(buf.iter().fold(0.0, |acc, c| acc.max(c.re.abs())))
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// L² inner product over one period, computed by Parseval.
pub fn inner_product(a: &Field, b: &Field) -> f64 {
    let period = a.grid().period();
    let sa = a.spectral();
    let sb = b.spectral();
    period
        * sa.iter()
            .zip(sb.iter())
            .map(|(x, y)| (x * y.conj()).re)
            .sum::<f64>()
}

/// `P Σ_j |k_j|^{2m} |ψ̂_j|²`, i.e. `‖∂ₓᵐψ‖²`. Odd orders skip the
/// Nyquist mode to match [`derivative`].
pub fn seminorm_sq(field: &Field, m: u32) -> f64 {
    let grid = field.grid();
    let nyquist = grid.nyquist_index();
    let k = grid.wavenumbers();
    grid.period()
        * field
            .spectral()
            .iter()
            .enumerate()
            .filter(|(i, _)| !(m % 2 == 1 && *i == nyquist))
            .map(|(i, c)| k[i].powi(2 * m as i32) * c.norm_sqr())
            .sum::<f64>()
}

/// Norms of one snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct NormBundle {
    pub l2: f64,
    /// `‖∂ₓᵐψ‖` for m = 1..4.
    pub seminorm: [f64; 4],
    pub sup_psi: f64,
    pub sup_dpsi: f64,
    pub mean: f64,
}

impl NormBundle {
    pub fn seminorm_1(&self) -> f64 {
        self.seminorm[0]
    }
    pub fn seminorm_2(&self) -> f64 {
        self.seminorm[1]
    }
    pub fn seminorm_3(&self) -> f64 {
        self.seminorm[2]
    }
    pub fn seminorm_4(&self) -> f64 {
        self.seminorm[3]
    }

    /// `‖ψ‖_{H²}² = ‖ψ‖² + ‖∂ₓψ‖² + ‖∂ₓ²ψ‖²`.
    pub fn h2_total_sq(&self) -> f64 {
        self.l2 * self.l2 + self.seminorm[0] * self.seminorm[0] + self.seminorm[1] * self.seminorm[1]
    }

    pub fn h2_total(&self) -> f64 {
        self.h2_total_sq().sqrt()
    }
}

/// Parseval norms plus refined sup norms (factor [`SUP_REFINEMENT`]).
pub fn norms(field: &Field) -> NormBundle {
    norms_with_refinement(field, SUP_REFINEMENT).expect("default refinement is supported")
}

/// As [`norms`], with sup norms taken on the `factor·N` grid.
pub fn norms_with_refinement(field: &Field, factor: usize) -> Result<NormBundle> {
    let l2 = (field.grid().period() * field.spectral().iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt();
    let seminorm = [1, 2, 3, 4].map(|m| seminorm_sq(field, m).sqrt());
    let dpsi = derivative(field, 1)?;
    Ok(NormBundle {
        l2,
        seminorm,
        sup_psi: sup_norm_refined(field, factor)?,
        sup_dpsi: sup_norm_refined(&dpsi, factor)?,
        mean: field.mean(),
    })
}
