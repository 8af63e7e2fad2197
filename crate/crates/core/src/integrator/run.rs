use std::sync::Arc;

use num_complex::Complex64;

use super::checkpoint::{Checkpoint, CHECKPOINT_FORMAT};
use super::stepper::Stepper;
use super::symbol::build_symbol;
use crate::config::RunConfig;
use crate::diagnostics::{DiagnosticsContext, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::initial::build_initial_data;
use crate::spectral::{make_grid, Field, SpectralGrid};

/// Output of the driver as it advances.
#[derive(Debug)]
pub enum Event<'a> {
    Snapshot { record: &'a DiagnosticsRecord, state: &'a Field },
    Checkpoint(&'a Checkpoint),
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub records: Vec<DiagnosticsRecord>,
    pub checkpoints: Vec<Checkpoint>,
    pub final_state: Field,
}

/// Fixed-step driver with `t = step·dt`. Snapshots fall on multiples of the
/// snapshot stride and on the final step.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: RunConfig,
    digest: String,
    grid: Arc<SpectralGrid>,
    stepper: Stepper,
    ctx: DiagnosticsContext,
    state: Vec<Complex64>,
    step: u64,
    total_steps: u64,
    record: DiagnosticsRecord,
}

impl Simulation {
    pub fn new(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        let grid = make_grid(config.grid.n_modes, config.grid.period)?;
        let psi0 = build_initial_data(&config.initial, &grid)?;
        let mut state = psi0.into_spectral();
        state[grid.nyquist_index()] = Complex64::default();
        let mut sim = Self::assemble(config, grid, state, 0, None)?;
        sim.record = sim.ctx.initial_record(&Field::from_spectral(&sim.grid, sim.state.clone()))?;
        Ok(sim)
    }

    /// Resumes from `cp`; the configuration must have the same digest.
    pub fn from_checkpoint(cp: &Checkpoint, config: &RunConfig) -> Result<Self> {
        config.validate()?;
        let expected = config.digest();
        if cp.digest != expected {
            return Err(Error::DigestMismatch {
                expected,
                found: cp.digest.clone(),
            });
        }
        let grid = make_grid(config.grid.n_modes, config.grid.period)?;
        let mut sim = Self::assemble(config, grid, cp.state.clone(), cp.step, cp.prev_nonlinear.clone())?;
        if cp.step > sim.total_steps {
            return Err(Error::Checkpoint(format!(
                "checkpoint step {} is past the final step {}",
                cp.step, sim.total_steps
            )));
        }
        sim.record = cp.record.clone();
        Ok(sim)
    }

    fn assemble(
        config: &RunConfig,
        grid: Arc<SpectralGrid>,
        state: Vec<Complex64>,
        step: u64,
        prev_nonlinear: Option<Vec<Complex64>>,
    ) -> Result<Self> {
        let p = &config.physics;
        let model = config.flux_model()?;
        let symbol = build_symbol(&grid, p.delta, p.nu)?;
        let mut stepper = Stepper::new(&grid, &symbol, model.clone(), p.u_tilde, config.stepper.dt, config.stepper.scheme)?;
        stepper.set_prev_nonlinear(prev_nonlinear);
        let mut ctx = DiagnosticsContext::new(p.nu, model, p.u_tilde);
        ctx.refinement = config.diagnostics.refinement;
        ctx.tolerance = config.diagnostics.tolerance;
        ctx.epsilon = config.diagnostics.epsilon;
        Ok(Self {
            config: config.clone(),
            digest: config.digest(),
            grid,
            stepper,
            ctx,
            state,
            step,
            total_steps: config.total_steps(),
            record: placeholder_record(),
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn total_steps(&self) -> u64 {
        self.total_steps
    }

    pub fn t(&self) -> f64 {
        self.step as f64 * self.config.stepper.dt
    }

    pub fn is_finished(&self) -> bool {
        self.step >= self.total_steps
    }

    pub fn state(&self) -> Field {
        Field::from_spectral(&self.grid, self.state.clone())
    }

    pub fn spectral_state(&self) -> &[Complex64] {
        &self.state
    }

    /// Ledger entry of the latest snapshot.
    pub fn record(&self) -> &DiagnosticsRecord {
        &self.record
    }

    pub fn is_snapshot_step(&self, step: u64) -> bool {
        step % self.config.stepper.snapshot_stride == 0 || step == self.total_steps
    }

    fn is_checkpoint_step(&self, step: u64) -> bool {
        self.config.stepper.checkpoint_stride.is_some_and(|c| step > 0 && step % c == 0)
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            format: CHECKPOINT_FORMAT.into(),
            digest: self.digest.clone(),
            step: self.step,
            t: self.t(),
            scheme: self.config.stepper.scheme,
            n_modes: self.grid.n_modes(),
            period: self.grid.period(),
            state: self.state.clone(),
            prev_nonlinear: self.stepper.prev_nonlinear().map(<[_]>::to_vec),
            record: self.record.clone(),
        }
    }

    /// One step; returns the new ledger entry on snapshot steps.
    pub fn advance(&mut self) -> Result<Option<&DiagnosticsRecord>> {
        if self.is_finished() {
            return Ok(None);
        }
        let t_next = (self.step + 1) as f64 * self.config.stepper.dt;
        self.stepper.step(&mut self.state).map_err(|e| at_time(e, t_next))?;
        self.step += 1;
        if self.is_snapshot_step(self.step) {
            let psi = self.state();
            self.record = self.ctx.advance(&self.record, &psi, self.t()).map_err(|e| at_time(e, t_next))?;
            return Ok(Some(&self.record));
        }
        Ok(None)
    }

    /// Runs to the end, reporting the initial snapshot first when starting
    /// from step 0.
    pub fn run(&mut self, mut observer: impl FnMut(Event<'_>)) -> Result<Trajectory> {
        let mut records = Vec::new();
        let mut checkpoints = Vec::new();
        if self.step == 0 {
            let psi = self.state();
            observer(Event::Snapshot {
                record: &self.record,
                state: &psi,
            });
            records.push(self.record.clone());
        }
        while !self.is_finished() {
            if self.advance()?.is_some() {
                let psi = self.state();
                observer(Event::Snapshot {
                    record: &self.record,
                    state: &psi,
                });
                records.push(self.record.clone());
            }
            if self.is_checkpoint_step(self.step) {
                let cp = self.checkpoint();
                observer(Event::Checkpoint(&cp));
                checkpoints.push(cp);
            }
        }
        Ok(Trajectory {
            records,
            checkpoints,
            final_state: self.state(),
        })
    }
}

fn at_time(e: Error, t: f64) -> Error {
    match e {
        Error::BlowUp { detail, .. } => Error::BlowUp { t, detail },
        other => other,
    }
}

fn placeholder_record() -> DiagnosticsRecord {
    DiagnosticsRecord {
        t: 0.0,
        norms: Default::default(),
        initial_l2_sq: 0.0,
        dissipation_integral: 0.0,
        energy_residual: 0.0,
        h2_balance_residual: 0.0,
        h2_rate_terms: 0.0,
        apriori_int8: 0.0,
        apriori_int83: 0.0,
        h3_integral: 0.0,
        h4_integral: 0.0,
        running: Default::default(),
        min_interpolation_slack: None,
        interpolation_holds: true,
    }
}

pub fn run(config: &RunConfig) -> Result<Trajectory> {
    run_with(config, |_| {})
}

pub fn run_with(config: &RunConfig, observer: impl FnMut(Event<'_>)) -> Result<Trajectory> {
    Simulation::new(config)?.run(observer)
}

pub fn restart(checkpoint: &Checkpoint, config: &RunConfig) -> Result<Trajectory> {
    restart_with(checkpoint, config, |_| {})
}

pub fn restart_with(checkpoint: &Checkpoint, config: &RunConfig, observer: impl FnMut(Event<'_>)) -> Result<Trajectory> {
    Simulation::from_checkpoint(checkpoint, config)?.run(observer)
}
