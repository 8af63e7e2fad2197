use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Refinement factors accepted by [`SpectralGrid::refined_inverse`].
pub const REFINEMENT_FACTORS: [usize; 4] = [1, 2, 4, 8];

/// Uniform periodic grid on `[0, period)` with `n_modes` nodes.
///
/// Spectral arrays are kept in FFT order: index `i` holds mode
/// `j = i` for `i <= N/2` and `j = i - N` otherwise, so the represented
/// modes are `-N/2+1 ..= N/2` and index `N/2` is the Nyquist mode.
pub struct SpectralGrid {
    n_modes: usize,
    period: f64,
    spacing: f64,
    wavenumbers: Vec<f64>,
    dealias_mask: Vec<bool>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    refined: [OnceLock<Arc<dyn Fft<f64>>>; 4],
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n_modes", &self.n_modes)
            .field("period", &self.period)
            .finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n_modes == other.n_modes && self.period.to_bits() == other.period.to_bits()
    }
}

/// Builds a shared grid. See [`SpectralGrid::new`].
pub fn make_grid(n_modes: usize, period: f64) -> Result<Arc<SpectralGrid>> {
    SpectralGrid::new(n_modes, period).map(Arc::new)
}

impl SpectralGrid {
    pub fn new(n_modes: usize, period: f64) -> Result<Self> {
        if n_modes % 2 != 0 {
            return Err(Error::Grid(format!("n_modes must be even, got {n_modes}")));
        }
        if n_modes < 8 {
            return Err(Error::Grid(format!("n_modes must be at least 8, got {n_modes}")));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::Grid(format!("period must be positive, got {period}")));
        }
        let scale = 2.0 * PI / period;
        let wavenumbers = (0..n_modes)
            .map(|i| scale * mode_of_index(i, n_modes) as f64)
            .collect();
        let cutoff = (n_modes / 3) as i64;
        let dealias_mask = (0..n_modes)
            .map(|i| mode_of_index(i, n_modes).abs() <= cutoff)
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            n_modes,
            period,
            spacing: period / n_modes as f64,
            wavenumbers,
            dealias_mask,
            forward: planner.plan_fft_forward(n_modes),
            inverse: planner.plan_fft_inverse(n_modes),
            refined: Default::default(),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Wavenumbers `k_j = 2πj/P` in FFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Wavenumbers sorted by mode, `j = -N/2+1 ..= N/2`.
    pub fn sorted_wavenumbers(&self) -> Vec<f64> {
        let mut k = self.wavenumbers.clone();
        k.sort_by(|a, b| a.total_cmp(b));
        k
    }

    pub fn dealias_mask(&self) -> &[bool] {
        &self.dealias_mask
    }

    /// Signed mode number stored at FFT index `i`.
    pub fn mode(&self, index: usize) -> i64 {
        mode_of_index(index, self.n_modes)
    }

    /// FFT index of signed mode `j`, if representable.
    pub fn index_of_mode(&self, mode: i64) -> Option<usize> {
        let half = (self.n_modes / 2) as i64;
        if mode > half || mode <= -half {
            return None;
        }
        Some(mode.rem_euclid(self.n_modes as i64) as usize)
    }

    pub fn nyquist_index(&self) -> usize {
        self.n_modes / 2
    }

    /// Node coordinates `x_i = i h`.
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_modes).map(move |i| i as f64 * self.spacing)
    }

    pub(crate) fn scratch_len(&self) -> usize {
        self.forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len())
    }

    /// Nodal to spectral, carrying the `1/N` factor.
    pub fn forward(&self, nodal: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = nodal.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut scratch = vec![Complex64::default(); self.scratch_len()];
        self.forward_in_place(&mut buf, &mut scratch);
        buf
    }

    pub(crate) fn forward_in_place(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.forward.process_with_scratch(buf, scratch);
        let inv_n = 1.0 / self.n_modes as f64;
        for c in buf.iter_mut() {
            *c *= inv_n;
        }
    }

    /// Spectral to nodal, complex result (imaginary part is roundoff for
    /// conjugate-symmetric input).
    pub fn inverse_complex(&self, spectral: &[Complex64]) -> Vec<Complex64> {
        let mut buf = spectral.to_vec();
        let mut scratch = vec![Complex64::default(); self.scratch_len()];
        self.inverse_in_place(&mut buf, &mut scratch);
        buf
    }

    pub(crate) fn inverse_in_place(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.inverse.process_with_scratch(buf, scratch);
    }

    /// Spectral to nodal, real part.
    pub fn inverse(&self, spectral: &[Complex64]) -> Vec<f64> {
        self.inverse_complex(spectral).into_iter().map(|c| c.re).collect()
    }

    /// Inverse plan on the `factor * N` point grid.
    pub(crate) fn refined_inverse(&self, factor: usize) -> Result<Arc<dyn Fft<f64>>> {
        let slot = REFINEMENT_FACTORS
            .iter()
            .position(|&f| f == factor)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "refinement factor {factor} not in {REFINEMENT_FACTORS:?}"
                ))
            })?;
        Ok(self.refined[slot]
            .get_or_init(|| FftPlanner::new().plan_fft_inverse(factor * self.n_modes))
            .clone())
    }
}

fn mode_of_index(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}
