//! Initial deviations `ψ₀` built on a grid.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{norms, Field, SpectralGrid};

/// Relative spectral tail above which a profile counts as under-resolved.
pub const TAIL_TOLERANCE: f64 = 1e-10;

/// One term `amplitude · sin(k x + phase)` with `k = 2π·mode/P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeTerm {
    pub amplitude: f64,
    pub mode: i64,
    #[serde(default)]
    pub phase: f64,
}

/// Profile shapes. `center` defaults to `P/2`; distances are periodic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialShape {
    /// `a·exp(−d²/(2w²))`
    Gaussian {
        amplitude: f64,
        #[serde(default)]
        center: Option<f64>,
        width: f64,
    },
    /// `a·sech²(d/w)`
    Sech2 {
        amplitude: f64,
        #[serde(default)]
        center: Option<f64>,
        width: f64,
    },
    /// `a·(d/w)·exp(1/2 − d²/(2w²))`, odd about the center with extrema `±a`
    /// at `d = ±w`.
    GaussianDipole {
        amplitude: f64,
        #[serde(default)]
        center: Option<f64>,
        width: f64,
    },
    /// `a·exp(−d²/(2w²))·cos(k₀d)`: a wave packet with carrier wavenumber
    /// `k₀`.
    GaussianPacket {
        amplitude: f64,
        #[serde(default)]
        center: Option<f64>,
        width: f64,
        wavenumber: f64,
    },
    /// Gaussian random coefficients on modes `1..=k_max`, scaled so the
    /// nodal maximum of `|ψ|` equals `amplitude`.
    RandomBandlimited {
        amplitude: f64,
        k_max: usize,
        #[serde(default)]
        seed: u64,
    },
    ModeSum { modes: Vec<ModeTerm> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialDataSpec {
    #[serde(flatten)]
    pub shape: InitialShape,
    /// Remove the mean after construction.
    #[serde(default)]
    pub zero_mean: bool,
}

impl InitialDataSpec {
    pub fn new(shape: InitialShape, zero_mean: bool) -> Self {
        Self { shape, zero_mean }
    }
}

fn periodic_offset(x: f64, center: f64, period: f64) -> f64 {
    let d = (x - center).rem_euclid(period);
    if d > 0.5 * period {
        d - period
    } else {
        d
    }
}

fn check_profile(amplitude: f64, width: f64) -> Result<()> {
    if !amplitude.is_finite() {
        return Err(Error::InitialData(format!("amplitude {amplitude} is not finite")));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::InitialData(format!("width {width} must be positive")));
    }
    Ok(())
}

pub fn build_initial_data(spec: &InitialDataSpec, grid: &Arc<SpectralGrid>) -> Result<Field> {
    let p = grid.period();
    let n = grid.n_modes();
    let k_limit = n / 3;
    let profile = |amplitude: f64, center: Option<f64>, width: f64, f: fn(f64) -> f64| -> Result<Field> {
        check_profile(amplitude, width)?;
        let c = center.unwrap_or(0.5 * p);
        Ok(Field::from_fn(grid, |x| amplitude * f(periodic_offset(x, c, p) / width)))
    };
    let field = match &spec.shape {
        InitialShape::Gaussian { amplitude, center, width } => {
            profile(*amplitude, *center, *width, |s| (-0.5 * s * s).exp())?
        }
        InitialShape::Sech2 { amplitude, center, width } => profile(*amplitude, *center, *width, |s| {
            let c = s.cosh();
            1.0 / (c * c)
        })?,
        InitialShape::GaussianDipole { amplitude, center, width } => {
            profile(*amplitude, *center, *width, |s| s * (0.5 - 0.5 * s * s).exp())?
        }
        InitialShape::GaussianPacket {
            amplitude,
            center,
            width,
            wavenumber,
        } => {
            check_profile(*amplitude, *width)?;
            if !wavenumber.is_finite() {
                return Err(Error::InitialData(format!("wavenumber {wavenumber} is not finite")));
            }
            let c = center.unwrap_or(0.5 * p);
            let (a, w, k0) = (*amplitude, *width, *wavenumber);
            Field::from_fn(grid, |x| {
                let d = periodic_offset(x, c, p);
                a * (-0.5 * (d / w).powi(2)).exp() * (k0 * d).cos()
            })
        }
        InitialShape::RandomBandlimited { amplitude, k_max, seed } => {
            if *k_max == 0 || *k_max > k_limit {
                return Err(Error::InitialData(format!(
                    "random_bandlimited k_max = {k_max} must lie in 1..={k_limit} (the dealiased band)"
                )));
            }
            random_bandlimited(grid, *amplitude, *k_max, *seed)?
        }
        InitialShape::ModeSum { modes } => {
            for m in modes {
                if m.mode == 0 || m.mode.unsigned_abs() as usize > k_limit {
                    return Err(Error::InitialData(format!(
                        "mode {} must satisfy 1 <= |mode| <= {k_limit}",
                        m.mode
                    )));
                }
                if !(m.amplitude.is_finite() && m.phase.is_finite()) {
                    return Err(Error::InitialData(format!("mode {} has nonfinite parameters", m.mode)));
                }
            }
            let two_pi_over_p = 2.0 * std::f64::consts::PI / p;
            Field::from_fn(grid, |x| {
                modes
                    .iter()
                    .map(|m| m.amplitude * (two_pi_over_p * m.mode as f64 * x + m.phase).sin())
                    .sum()
            })
        }
    };

    check_resolved(&field)?;
    let field = if spec.zero_mean {
        field.map_spectral(|i, c| if i == 0 { Complex64::default() } else { c })
    } else {
        field
    };
    let n2 = norms(&field);
    if !(n2.h2_total().is_finite()) {
        return Err(Error::InitialData("discrete H² norm is not finite".into()));
    }
    Ok(field)
}

fn random_bandlimited(grid: &Arc<SpectralGrid>, amplitude: f64, k_max: usize, seed: u64) -> Result<Field> {
    if !amplitude.is_finite() {
        return Err(Error::InitialData(format!("amplitude {amplitude} is not finite")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hat = vec![Complex64::default(); grid.n_modes()];
    for j in 1..=k_max as i64 {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        let c = Complex64::new(re, im);
        hat[grid.index_of_mode(j).expect("mode in band")] = c;
        hat[grid.index_of_mode(-j).expect("mode in band")] = c.conj();
    }
    let raw = Field::from_spectral(grid, hat);
    let peak = raw.nodal().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Ok(raw);
    }
    let scale = amplitude / peak;
    Ok(raw.map_spectral(|_, c| c * scale))
}

/// Rejects profiles whose coefficients beyond the dealiased band exceed
/// [`TAIL_TOLERANCE`] of the peak coefficient.
fn check_resolved(field: &Field) -> Result<()> {
    let hat = field.spectral();
    let mask = field.grid().dealias_mask();
    let peak = hat.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let tail = hat
        .iter()
        .zip(mask)
        .filter(|(_, &keep)| !keep)
        .fold(0.0f64, |m, (c, _)| m.max(c.norm()));
    if !(peak.is_finite() && tail.is_finite()) {
        return Err(Error::InitialData("profile has nonfinite values".into()));
    }
    if tail > TAIL_TOLERANCE * peak {
        return Err(Error::InitialData(format!(
            "under-resolved: spectral tail beyond |j| = {} is {:.3e} of the peak (limit {TAIL_TOLERANCE:e}); widen the profile or add modes",
            field.grid().n_modes() / 3,
            tail / peak
        )));
    }
    Ok(())
}
