//! Convective flux models `f(u)` and the pseudo-spectral nonlinear term
//! `N(ψ) = -∂ₓ f(ψ + ũ)`.
//!
//! Flux specification strings:
//!
//! * `burgers`: `f(u) = u²/2`
//! * `poly:[c0,c1,...]`: `f(u) = Σ cᵢ uⁱ`; entries are separated by commas,
//!   surrounding ASCII whitespace is ignored and each entry is parsed with
//!   Rust's correctly rounded `f64` parser. `poly:[]` is the zero flux.
//! * `powerlaw:p`: `f(u) = u|u|^p`, admitted for `p = 0` or `p >= 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Field, SpectralGrid};

/// Largest growth exponent admitted by the well-posedness hypothesis.
pub const Q_MAX: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub enum FluxKind {
    Burgers,
    Polynomial(Vec<f64>),
    PowerLaw(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluxModel {
    kind: FluxKind,
    q_declared: f64,
    label: String,
}

impl FluxModel {
    pub fn new(kind: FluxKind, q_declared: f64) -> Result<Self> {
        check_q(q_declared)?;
        let label = match &kind {
            FluxKind::Burgers => "burgers".to_string(),
            FluxKind::Polynomial(c) => format!(
                "poly:[{}]",
                c.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(",")
            ),
            FluxKind::PowerLaw(p) => {
                check_power(*p, &format!("powerlaw:{p:?}"))?;
                format!("powerlaw:{p:?}")
            }
        };
        Ok(Self { kind, q_declared, label })
    }

    pub fn burgers() -> Self {
        Self::new(FluxKind::Burgers, 0.0).expect("burgers is admissible")
    }

    /// `f ≡ 0`.
    pub fn zero() -> Self {
        Self::new(FluxKind::Polynomial(Vec::new()), 0.0).expect("zero flux is admissible")
    }

    /// `f(u) = c u`.
    pub fn linear(c: f64) -> Self {
        Self::new(FluxKind::Polynomial(vec![0.0, c]), 0.0).expect("linear flux is admissible")
    }

    /// Parses a flux specification string (see module docs).
    pub fn parse(spec: &str, q_declared: f64) -> Result<Self> {
        let bad = |reason: &str| Error::FluxSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let kind = if spec == "burgers" {
            FluxKind::Burgers
        } else if let Some(rest) = spec.strip_prefix("poly:") {
            let inner = rest
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| bad("expected poly:[c0,c1,...]"))?;
            let coeffs = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|tok| tok.trim().parse::<f64>().map_err(|_| bad(&format!("bad coefficient `{}`", tok.trim()))))
                    .collect::<Result<Vec<_>>>()?
            };
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(bad("coefficients must be finite"));
            }
            FluxKind::Polynomial(coeffs)
        } else if let Some(rest) = spec.strip_prefix("powerlaw:") {
            let p = rest.trim().parse::<f64>().map_err(|_| bad("bad exponent"))?;
            check_power(p, spec)?;
            FluxKind::PowerLaw(p)
        } else {
            return Err(bad("expected burgers, poly:[...] or powerlaw:p"));
        };
        let mut model = Self::new(kind, q_declared)?;
        model.label = spec.to_string();
        Ok(model)
    }

    pub fn kind(&self) -> &FluxKind {
        &self.kind
    }

    pub fn q_declared(&self) -> f64 {
        self.q_declared
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// True for the identically zero flux.
    pub fn is_zero(&self) -> bool {
        matches!(&self.kind, FluxKind::Polynomial(c) if c.iter().all(|&v| v == 0.0))
    }

    pub fn eval_flux(&self, u: f64) -> f64 {
        match &self.kind {
            FluxKind::Burgers => 0.5 * u * u,
            FluxKind::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ci| acc * u + ci),
            FluxKind::PowerLaw(p) => u * u.abs().powf(*p),
        }
    }

    pub fn eval_flux_prime(&self, u: f64) -> f64 {
        match &self.kind {
            FluxKind::Burgers => u,
            FluxKind::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (i, &ci)| acc * u + i as f64 * ci),
            FluxKind::PowerLaw(p) => (p + 1.0) * u.abs().powf(*p),
        }
    }

    pub fn eval_flux_second(&self, u: f64) -> f64 {
        match &self.kind {
            FluxKind::Burgers => 1.0,
            FluxKind::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(2)
                .rev()
                .fold(0.0, |acc, (i, &ci)| acc * u + (i * (i - 1)) as f64 * ci),
            FluxKind::PowerLaw(p) if *p == 0.0 => 0.0,
            FluxKind::PowerLaw(_) if u == 0.0 => 0.0,
            FluxKind::PowerLaw(p) => p * (p + 1.0) * u.signum() * u.abs().powf(p - 1.0),
        }
    }
}

fn check_q(q: f64) -> Result<()> {
    if !(0.0..=Q_MAX).contains(&q) {
        return Err(Error::Config(vec![format!(
            "q_declared = {q} violates the growth hypothesis |f''(u)| <= C(1 + |u|^q) with 0 <= q <= 5"
        )]));
    }
    Ok(())
}

fn check_power(p: f64, spec: &str) -> Result<()> {
    if !(p == 0.0 || (p.is_finite() && p >= 1.0)) {
        return Err(Error::FluxSpec {
            spec: spec.to_string(),
            reason: format!("power-law exponent {p} is not C²; need p = 0 or p >= 1"),
        });
    }
    Ok(())
}

/// Sampled evidence for the growth condition on `f''`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub q_tested: f64,
    pub u_range: (f64, f64),
    pub c_estimate: f64,
    pub satisfied: bool,
}

/// Samples `|f''(u)| / max(1, |u|^q)` on `[-U, U]` (uniformly, endpoints and
/// `u = 0` included) and reports the largest ratio. The condition is judged
/// satisfied when the ratio is finite and does not increase while moving
/// outward through the outer 10% of the range on either side.
pub fn validate_growth(model: &FluxModel, q: f64, u_max: f64, samples: usize) -> Result<GrowthReport> {
    check_q(q)?;
    if !(u_max.is_finite() && u_max > 0.0) {
        return Err(Error::InvalidArgument(format!("growth range must be positive, got {u_max}")));
    }
    if samples < 1000 {
        return Err(Error::InvalidArgument(format!("need at least 1000 samples, got {samples}")));
    }
    let ratio = |u: f64| model.eval_flux_second(u).abs() / u.abs().powf(q).max(1.0);
    let us: Vec<f64> = (0..samples)
        .map(|i| -u_max + 2.0 * u_max * (i as f64 / (samples - 1) as f64))
        .collect();
    let c_estimate = us.iter().map(|&u| ratio(u)).chain([ratio(0.0)]).fold(0.0, f64::max);

    let tail_start = 0.9 * u_max;
    let outward_non_increasing = |tail: &mut dyn Iterator<Item = f64>| {
        let r: Vec<f64> = tail.map(ratio).collect();
        r.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + f64::MIN_POSITIVE)
    };
    let right = outward_non_increasing(&mut us.iter().copied().filter(|&u| u >= tail_start));
    let left = outward_non_increasing(&mut us.iter().rev().copied().filter(|&u| u <= -tail_start));

    Ok(GrowthReport {
        q_tested: q,
        u_range: (-u_max, u_max),
        c_estimate,
        satisfied: c_estimate.is_finite() && left && right,
    })
}

/// `N(ψ) = -∂ₓ D[f(ψ + ũ)]` with `D` the 2/3-rule projection.
pub fn nonlinear_term(psi: &Field, model: &FluxModel, u_tilde: f64) -> Result<Field> {
    let grid = psi.grid();
    let mut out = vec![Complex64::default(); grid.n_modes()];
    let mut work = NonlinearWork::new(grid);
    work.evaluate(grid, model, u_tilde, &psi.spectral(), &mut out)?;
    Ok(Field::from_spectral(grid, out))
}

/// Reusable buffers for repeated evaluation of the nonlinear term.
#[derive(Debug, Clone)]
pub(crate) struct NonlinearWork {
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl NonlinearWork {
    pub(crate) fn new(grid: &SpectralGrid) -> Self {
        Self {
            buf: vec![Complex64::default(); grid.n_modes()],
            scratch: vec![Complex64::default(); grid.scratch_len()],
        }
    }

    /// Writes the spectral coefficients of `N(ψ)` into `out`.
    pub(crate) fn evaluate(
        &mut self,
        grid: &SpectralGrid,
        model: &FluxModel,
        u_tilde: f64,
        psi_hat: &[Complex64],
        out: &mut [Complex64],
    ) -> Result<()> {
        if model.is_zero() {
            out.fill(Complex64::default());
            return Ok(());
        }
        self.buf.copy_from_slice(psi_hat);
        grid.inverse_in_place(&mut self.buf, &mut self.scratch);
        for c in self.buf.iter_mut() {
            let v = model.eval_flux(c.re + u_tilde);
            if !v.is_finite() {
                return Err(Error::BlowUp {
                    t: f64::NAN,
                    detail: format!("flux {} is nonfinite at u = {}", model.label(), c.re + u_tilde),
                });
            }
            *c = Complex64::new(v, 0.0);
        }
        grid.forward_in_place(&mut self.buf, &mut self.scratch);
        let mask = grid.dealias_mask();
        let k = grid.wavenumbers();
        for (i, o) in out.iter_mut().enumerate() {
            *o = if mask[i] {
                // -(i k) F
                let f = self.buf[i];
                Complex64::new(k[i] * f.im, -k[i] * f.re)
            } else {
                Complex64::default()
            };
        }
        Ok(())
    }
}
