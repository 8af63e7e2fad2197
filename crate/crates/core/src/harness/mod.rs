//! Front-end commands. Each writes its artifacts into an output directory
//! and returns a machine-readable result; printing is left to the caller.

mod plot;
pub mod verify;

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{load_config, RunConfig};
use crate::diagnostics::{decay_report, write_csv, DecayReport, DiagnosticsRecord, RunningSuprema};
use crate::error::{Error, Result};
use crate::exec;
use crate::integrator::{Checkpoint, Event, Simulation, Trajectory};
use crate::spectral::{inner_product, Field, NormBundle};

pub use plot::norm_history_svg;

/// Overrides the output directory of every command when set.
pub const OUTPUT_ENV: &str = "DDSIM_OUT";

/// Exit code of a verification failure.
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Resolves the output directory: explicit flag, then [`OUTPUT_ENV`], then
/// `fallback`.
pub fn output_dir(flag: Option<&Path>, fallback: &Path) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(OUTPUT_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => fallback.to_path_buf(),
    }
}

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("output is always serializable");
    write_file(path, text + "\n")
}

/// Content of `summary.json`. Holds no timings, so repeated runs produce
/// identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub digest: String,
    pub scheme: &'static str,
    pub n_modes: usize,
    pub period: f64,
    pub dt: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub steps: u64,
    pub snapshots: usize,
    pub initial_norms: NormBundle,
    pub final_norms: NormBundle,
    pub max_relative_energy_residual: f64,
    pub max_h2_balance_residual: f64,
    pub mass_drift: f64,
    pub interpolation_violations: usize,
    pub apriori_int8: f64,
    pub apriori_int83: f64,
    pub running_suprema: RunningSuprema,
    pub decay: Option<DecayReport>,
    pub checkpoints: Vec<String>,
}

impl RunSummary {
    fn new(config: &RunConfig, sim: &Simulation, t_start: f64, traj: &Trajectory, checkpoints: Vec<String>) -> Self {
        let records = &traj.records;
        let first = records.first().expect("a run records at least one snapshot");
        let last = records.last().expect("a run records at least one snapshot");
        let e0 = first.initial_l2_sq;
        let rel = |v: f64| if e0 > 0.0 { v / e0 } else { v };
        let max = |f: &dyn Fn(&DiagnosticsRecord) -> f64| records.iter().map(f).fold(0.0, f64::max);
        Self {
            digest: sim.digest().to_string(),
            scheme: config.stepper.scheme.name(),
            n_modes: config.grid.n_modes,
            period: config.grid.period,
            dt: config.stepper.dt,
            t_start,
            t_end: last.t,
            steps: sim.step_count(),
            snapshots: records.len(),
            initial_norms: first.norms,
            final_norms: last.norms,
            max_relative_energy_residual: max(&|r| rel(r.energy_residual.abs())),
            max_h2_balance_residual: max(&|r| r.h2_balance_residual),
            mass_drift: max(&|r| (r.norms.mean - first.norms.mean).abs()),
            interpolation_violations: records.iter().filter(|r| !r.interpolation_holds).count(),
            apriori_int8: last.apriori_int8,
            apriori_int83: last.apriori_int83,
            running_suprema: last.running,
            decay: decay_report(records, config.diagnostics.decay_threshold).ok(),
            checkpoints,
        }
    }
}

#[derive(Serialize)]
struct FinalState<'a> {
    t: f64,
    n_modes: usize,
    period: f64,
    /// IEEE-754 bit patterns `re:im`, FFT order.
    spectral: Vec<String>,
    nodal: &'a [f64],
}

fn write_final_state(path: &Path, t: f64, field: &Field) -> Result<()> {
    let nodal = field.nodal();
    let spectral = field
        .spectral()
        .iter()
        .map(|c| format!("{:016x}:{:016x}", c.re.to_bits(), c.im.to_bits()))
        .collect();
    write_json(
        path,
        &FinalState {
            t,
            n_modes: field.grid().n_modes(),
            period: field.grid().period(),
            spectral,
            nodal: &nodal,
        },
    )
}

fn drive(config: &RunConfig, mut sim: Simulation, out: &Path) -> Result<RunSummary> {
    create_dir(out)?;
    let cp_dir = out.join("checkpoints");
    let t_start = sim.t();
    write_file(&out.join("config.toml"), config.to_toml())?;
    let mut written = Vec::new();
    let mut io_error = None;
    let traj = sim.run(|ev| {
        if let Event::Checkpoint(cp) = ev {
            if io_error.is_some() {
                return;
            }
            let name = format!("step_{:010}.json", cp.step);
            let res = create_dir(&cp_dir).and_then(|_| cp.write(cp_dir.join(&name)));
            match res {
                Ok(()) => written.push(format!("checkpoints/{name}")),
                Err(e) => io_error = Some(e),
            }
        }
    })?;
    if let Some(e) = io_error {
        return Err(e);
    }

    let csv_path = out.join("ledger.csv");
    let mut csv = Vec::new();
    write_csv(&mut csv, &traj.records).expect("writing to memory");
    write_file(&csv_path, csv)?;
    write_final_state(&out.join("final_state.json"), sim.t(), &traj.final_state)?;
    write_file(&out.join("norms.svg"), norm_history_svg(&traj.records))?;
    let summary = RunSummary::new(config, &sim, t_start, &traj, written);
    write_json(&out.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Runs one configuration, writing `ledger.csv`, `summary.json`,
/// `final_state.json`, `norms.svg`, `config.toml` and any checkpoints.
pub fn cmd_run(config_path: &Path, out: Option<&Path>) -> Result<(PathBuf, RunSummary)> {
    let config = load_config(config_path)?;
    run_config(&config, out)
}

pub fn run_config(config: &RunConfig, out: Option<&Path>) -> Result<(PathBuf, RunSummary)> {
    let dir = output_dir(out, &config.output_dir);
    let sim = Simulation::new(config)?;
    let summary = drive(config, sim, &dir)?;
    Ok((dir, summary))
}

/// Continues a run from a checkpoint. Without an explicit configuration the
/// `config.toml` written next to the checkpoint directory is used.
pub fn cmd_restart(checkpoint: &Path, config_path: Option<&Path>, out: Option<&Path>) -> Result<(PathBuf, RunSummary)> {
    let cp = Checkpoint::read(checkpoint)?;
    let run_dir = checkpoint
        .parent()
        .and_then(Path::parent)
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let config_path = config_path.map(Path::to_path_buf).unwrap_or_else(|| run_dir.join("config.toml"));
    let config = load_config(&config_path)?;
    let sim = Simulation::from_checkpoint(&cp, &config)?;
    let dir = output_dir(out, &run_dir.join(format!("restart_{:010}", cp.step)));
    let summary = drive(&config, sim, &dir)?;
    Ok((dir, summary))
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub config: String,
    pub exit_code: i32,
    pub message: String,
    pub output: Option<PathBuf>,
}

/// Runs every `*.toml` in `dir` (sorted by name) through [`exec::map`],
/// each into `<out>/<stem>`, and writes `sweep.json`.
pub fn cmd_sweep(dir: &Path, out: Option<&Path>) -> Result<(PathBuf, Vec<SweepEntry>)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    let base = output_dir(out, &PathBuf::from("out/sweep"));
    create_dir(&base)?;
    let entries = exec::map(&paths, |p| {
        let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let target = base.join(&stem);
        let result = load_config(p).and_then(|c| run_config(&c, Some(&target)));
        match result {
            Ok((dir, _)) => SweepEntry {
                config: p.display().to_string(),
                exit_code: 0,
                message: "ok".into(),
                output: Some(dir),
            },
            Err(e) => SweepEntry {
                config: p.display().to_string(),
                exit_code: e.exit_code(),
                message: e.to_string(),
                output: None,
            },
        }
    });
    write_json(&base.join("sweep.json"), &entries)?;
    Ok((base, entries))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub dt: f64,
    pub steps: u64,
    pub final_l2: f64,
    /// L² distance to the next finer run.
    pub difference_to_next: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// `log₂(‖u_dt − u_dt/2‖ / ‖u_dt/2 − u_dt/4‖)`.
    pub observed_order: f64,
}

/// Final states of `dt`, `dt/2`, `dt/4`.
pub fn convergence_study(config: &RunConfig) -> Result<ConvergenceReport> {
    let configs: Vec<RunConfig> = [1.0, 0.5, 0.25]
        .iter()
        .map(|f| {
            let mut c = config.clone();
            c.stepper.dt *= f;
            c.stepper.checkpoint_stride = None;
            c.stepper.snapshot_stride = c.total_steps().max(1);
            c
        })
        .collect();
    let finals = exec::map(&configs, |c| Simulation::new(c).and_then(|mut s| s.run(|_| {})));
    let finals: Vec<Field> = finals.into_iter().map(|r| r.map(|t| t.final_state)).collect::<Result<_>>()?;
    let dist = |a: &Field, b: &Field| {
        let d = a.axpby(1.0, b, -1.0);
        inner_product(&d, &d).sqrt()
    };
    let diffs = [dist(&finals[0], &finals[1]), dist(&finals[1], &finals[2])];
    let rows = configs
        .iter()
        .zip(&finals)
        .enumerate()
        .map(|(i, (c, f))| ConvergenceRow {
            dt: c.stepper.dt,
            steps: c.total_steps(),
            final_l2: inner_product(f, f).sqrt(),
            difference_to_next: diffs.get(i).copied(),
        })
        .collect();
    Ok(ConvergenceReport {
        rows,
        observed_order: (diffs[0] / diffs[1]).log2(),
    })
}

/// Writes `converge.json` and `converge.csv`.
pub fn cmd_converge(config_path: &Path, out: Option<&Path>) -> Result<(PathBuf, ConvergenceReport)> {
    let config = load_config(config_path)?;
    let report = convergence_study(&config)?;
    let dir = output_dir(out, &config.output_dir.join("converge"));
    create_dir(&dir)?;
    write_json(&dir.join("converge.json"), &report)?;
    let mut csv = String::from("dt,steps,final_l2,difference_to_next\n");
    for r in &report.rows {
        let diff = r.difference_to_next.map(|d| format!("{d:.16e}")).unwrap_or_default();
        csv.push_str(&format!("{:.16e},{},{:.16e},{diff}\n", r.dt, r.steps, r.final_l2));
    }
    write_file(&dir.join("converge.csv"), csv)?;
    Ok((dir, report))
}

/// Runs the acceptance suite (or part of it) and writes `verify.json`.
pub fn cmd_verify(suite: &str, out: Option<&Path>) -> Result<(PathBuf, Vec<verify::Outcome>)> {
    let ids = verify::suite_ids(suite)?;
    let outcomes = verify::run_suite(&ids);
    let dir = output_dir(out, &PathBuf::from("out/verify"));
    create_dir(&dir)?;
    write_json(&dir.join("verify.json"), &outcomes)?;
    Ok((dir, outcomes))
}
