use std::borrow::Cow;
use std::sync::Arc;

use num_complex::Complex64;

use super::grid::SpectralGrid;

/// A real scalar function on a periodic grid, held in nodal and/or
/// spectral form with the convention `ψ(x) = Σ_j ψ̂_j e^{i k_j x}`.
///
/// Readers see whichever representation they ask for; a stale one is
/// computed on the fly. Only [`Field::sync`] mutates the cache.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<SpectralGrid>,
    nodal: Vec<f64>,
    spectral: Vec<Complex64>,
    nodal_current: bool,
    spectral_current: bool,
}

impl Field {
    pub fn zeros(grid: &Arc<SpectralGrid>) -> Self {
        let n = grid.n_modes();
        Self {
            grid: grid.clone(),
            nodal: vec![0.0; n],
            spectral: vec![Complex64::default(); n],
            nodal_current: true,
            spectral_current: true,
        }
    }

    pub fn from_nodal(grid: &Arc<SpectralGrid>, nodal: Vec<f64>) -> Self {
        assert_eq!(nodal.len(), grid.n_modes(), "nodal length must match grid");
        Self {
            grid: grid.clone(),
            nodal,
            spectral: Vec::new(),
            nodal_current: true,
            spectral_current: false,
        }
    }

    pub fn from_spectral(grid: &Arc<SpectralGrid>, spectral: Vec<Complex64>) -> Self {
        assert_eq!(spectral.len(), grid.n_modes(), "spectral length must match grid");
        Self {
            grid: grid.clone(),
            nodal: Vec::new(),
            spectral,
            nodal_current: false,
            spectral_current: true,
        }
    }

    /// Samples `f` at the grid nodes.
    pub fn from_fn(grid: &Arc<SpectralGrid>, f: impl Fn(f64) -> f64) -> Self {
        Self::from_nodal(grid, grid.nodes().map(f).collect())
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn nodal(&self) -> Cow<'_, [f64]> {
        if self.nodal_current {
            Cow::Borrowed(&self.nodal)
        } else {
            Cow::Owned(self.grid.inverse(&self.spectral))
        }
    }

    pub fn spectral(&self) -> Cow<'_, [Complex64]> {
        if self.spectral_current {
            Cow::Borrowed(&self.spectral)
        } else {
            Cow::Owned(self.grid.forward(&self.nodal))
        }
    }

    /// Brings both representations up to date.
    pub fn sync(&mut self) {
        if !self.nodal_current {
            self.nodal = self.grid.inverse(&self.spectral);
            self.nodal_current = true;
        }
        if !self.spectral_current {
            self.spectral = self.grid.forward(&self.nodal);
            self.spectral_current = true;
        }
    }

    pub fn is_synced(&self) -> bool {
        self.nodal_current && self.spectral_current
    }

    pub fn into_spectral(self) -> Vec<Complex64> {
        match self.spectral_current {
            true => self.spectral,
            false => self.grid.forward(&self.nodal),
        }
    }

    /// Spatial mean, the `j = 0` coefficient.
    pub fn mean(&self) -> f64 {
        self.spectral()[0].re
    }

    /// Largest imaginary part left after inverting the spectral state.
    pub fn imaginary_residue(&self) -> f64 {
        self.grid
            .inverse_complex(&self.spectral())
            .iter()
            .fold(0.0, |m, c| m.max(c.im.abs()))
    }

    /// Applies `op` to every spectral coefficient together with its mode.
    pub fn map_spectral(&self, op: impl Fn(usize, Complex64) -> Complex64) -> Field {
        let out = self
            .spectral()
            .iter()
            .enumerate()
            .map(|(i, &c)| op(i, c))
            .collect();
        Field::from_spectral(&self.grid, out)
    }

    /// Pointwise linear combination `a·self + b·other`.
    pub fn axpby(&self, a: f64, other: &Field, b: f64) -> Field {
        let s = self.spectral();
        let o = other.spectral();
        let out = s.iter().zip(o.iter()).map(|(x, y)| x * a + y * b).collect();
        Field::from_spectral(&self.grid, out)
    }
}
