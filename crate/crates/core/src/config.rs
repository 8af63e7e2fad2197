//! TOML run configuration with defaults and full validation.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::flux::{validate_growth, FluxModel, Q_MAX};
use crate::initial::{build_initial_data, InitialDataSpec};
use crate::integrator::Scheme;
use crate::spectral::{SpectralGrid, REFINEMENT_FACTORS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "GridConfig::default_modes")]
    pub n_modes: usize,
    #[serde(default = "GridConfig::default_period")]
    pub period: f64,
}

impl GridConfig {
    fn default_modes() -> usize {
        512
    }
    fn default_period() -> f64 {
        40.0 * PI
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n_modes: Self::default_modes(),
            period: Self::default_period(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsConfig {
    pub delta: f64,
    pub nu: f64,
    /// Far-field state `ũ`.
    #[serde(default)]
    pub u_tilde: f64,
    #[serde(default = "PhysicsConfig::default_flux")]
    pub flux: String,
    #[serde(default)]
    pub q_declared: f64,
}

impl PhysicsConfig {
    fn default_flux() -> String {
        "burgers".into()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepperConfig {
    pub dt: f64,
    #[serde(default)]
    pub scheme: Scheme,
    pub t_end: f64,
    #[serde(default = "StepperConfig::default_snapshot_stride")]
    pub snapshot_stride: u64,
    /// No checkpoints when absent.
    #[serde(default)]
    pub checkpoint_stride: Option<u64>,
}

impl StepperConfig {
    fn default_snapshot_stride() -> u64 {
        10
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    #[serde(default = "DiagnosticsConfig::default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "DiagnosticsConfig::default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "DiagnosticsConfig::default_refinement")]
    pub refinement: usize,
    #[serde(default = "DiagnosticsConfig::default_decay_threshold")]
    pub decay_threshold: f64,
    /// Half-width of the `u` interval used to check the growth condition.
    #[serde(default = "DiagnosticsConfig::default_growth_range")]
    pub growth_range: f64,
    #[serde(default = "DiagnosticsConfig::default_growth_samples")]
    pub growth_samples: usize,
}

impl DiagnosticsConfig {
    fn default_tolerance() -> f64 {
        1e-3
    }
    fn default_epsilon() -> f64 {
        1e-300
    }
    fn default_refinement() -> usize {
        4
    }
    fn default_decay_threshold() -> f64 {
        0.1
    }
    fn default_growth_range() -> f64 {
        10.0
    }
    fn default_growth_samples() -> usize {
        2001
    }
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            tolerance: Self::default_tolerance(),
            epsilon: Self::default_epsilon(),
            refinement: Self::default_refinement(),
            decay_threshold: Self::default_decay_threshold(),
            growth_range: Self::default_growth_range(),
            growth_samples: Self::default_growth_samples(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub grid: GridConfig,
    pub physics: PhysicsConfig,
    pub initial: InitialDataSpec,
    pub stepper: StepperConfig,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default = "RunConfig::default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    fn default_output_dir() -> PathBuf {
        PathBuf::from("out")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn flux_model(&self) -> Result<FluxModel> {
        FluxModel::parse(&self.physics.flux, self.physics.q_declared)
    }

    /// Number of fixed steps from 0 to `t_end`.
    pub fn total_steps(&self) -> u64 {
        (self.stepper.t_end / self.stepper.dt).round() as u64
    }

    /// SHA-256 over everything that determines the trajectory; the output
    /// directory is excluded.
    pub fn digest(&self) -> String {
        let mut clone = self.clone();
        clone.output_dir = PathBuf::new();
        let bytes = serde_json::to_vec(&clone).expect("config is always serializable");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Collects every violated hypothesis or limit.
    pub fn validate(&self) -> Result<()> {
        let mut v = Vec::new();
        let g = &self.grid;
        if g.n_modes < 8 || g.n_modes % 2 != 0 {
            v.push(format!("grid.n_modes = {} must be even and at least 8", g.n_modes));
        }
        if !(g.period > 0.0 && g.period.is_finite()) {
            v.push(format!("grid.period = {} must be positive", g.period));
        }

        let p = &self.physics;
        if !(p.nu >= 0.0 && p.nu.is_finite()) {
            v.push(format!("physics.nu = {} violates the hypothesis nu >= 0", p.nu));
        }
        if !p.delta.is_finite() {
            v.push(format!("physics.delta = {} must be finite", p.delta));
        }
        if !p.u_tilde.is_finite() {
            v.push(format!("physics.u_tilde = {} must be finite", p.u_tilde));
        }
        if !(p.q_declared >= 0.0) {
            v.push(format!("physics.q_declared = {} violates the hypothesis q >= 0", p.q_declared));
        } else if !(p.q_declared <= Q_MAX) {
            v.push(format!(
                "physics.q_declared = {} violates the hypothesis q <= {Q_MAX}",
                p.q_declared
            ));
        }

        let s = &self.stepper;
        let steps_ok = s.dt > 0.0 && s.dt.is_finite() && s.t_end > 0.0 && s.t_end.is_finite();
        if !(s.dt > 0.0 && s.dt.is_finite()) {
            v.push(format!("stepper.dt = {} must be positive", s.dt));
        }
        if !(s.t_end > 0.0 && s.t_end.is_finite()) {
            v.push(format!("stepper.t_end = {} must be positive", s.t_end));
        }
        if steps_ok {
            let ratio = s.t_end / s.dt;
            if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) || ratio.round() < 1.0 {
                v.push(format!(
                    "stepper.t_end / stepper.dt = {ratio} must be a positive integer step count"
                ));
            }
        }
        if s.snapshot_stride == 0 {
            v.push("stepper.snapshot_stride must be positive".into());
        }
        if s.checkpoint_stride == Some(0) {
            v.push("stepper.checkpoint_stride must be positive".into());
        }

        let d = &self.diagnostics;
        if !(d.tolerance > 0.0) {
            v.push(format!("diagnostics.tolerance = {} must be positive", d.tolerance));
        }
        if !(d.epsilon > 0.0) {
            v.push(format!("diagnostics.epsilon = {} must be positive", d.epsilon));
        }
        if !REFINEMENT_FACTORS.contains(&d.refinement) {
            v.push(format!(
                "diagnostics.refinement = {} must be one of {REFINEMENT_FACTORS:?}",
                d.refinement
            ));
        }
        if !(d.decay_threshold > 0.0 && d.decay_threshold < 1.0) {
            v.push(format!("diagnostics.decay_threshold = {} must lie in (0, 1)", d.decay_threshold));
        }

        match FluxModel::parse(&p.flux, p.q_declared.clamp(0.0, Q_MAX)) {
            Err(e) => v.push(e.to_string()),
            Ok(model) if p.q_declared >= 0.0 && p.q_declared <= Q_MAX => {
                match validate_growth(&model, p.q_declared, d.growth_range, d.growth_samples) {
                    Ok(r) if !r.satisfied => v.push(format!(
                        "flux {} violates the growth condition |f''(u)| <= C(1 + |u|^q) for q = {} on [{}, {}]",
                        p.flux, p.q_declared, r.u_range.0, r.u_range.1
                    )),
                    Ok(_) => {}
                    Err(e) => v.push(e.to_string()),
                }
            }
            Ok(_) => {}
        }

        if v.is_empty() {
            let grid = SpectralGrid::new(g.n_modes, g.period);
            if let Err(e) = grid.and_then(|grid| build_initial_data(&self.initial, &std::sync::Arc::new(grid))) {
                v.push(e.to_string());
            }
        }

        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(v))
        }
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    RunConfig::from_toml(&text)
}
