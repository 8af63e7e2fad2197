use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ddsim::harness::{self, EXIT_VERIFY_FAILED};

/// Pseudo-spectral simulator for ∂ₜu + ∂ₓ(f(u) + δ∂ₓ²u + ν∂ₓ³u) = 0 on a
/// periodic domain, with a diagnostics ledger and verification suite.
#[derive(Parser)]
#[command(name = "ddsim", version)]
struct Cli {
    /// Output directory (overrides DDSIM_OUT and the config file).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Suppress progress and summary output.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one TOML configuration.
    Run { config: PathBuf },
    /// Run every *.toml file in a directory.
    Sweep { dir: PathBuf },
    /// Temporal convergence study over dt, dt/2, dt/4.
    Converge { config: PathBuf },
    /// Run the acceptance suite: `all`, one criterion (e.g. `a7`) or a
    /// comma-separated list.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Continue a run from a checkpoint file.
    Restart {
        checkpoint: PathBuf,
        /// Configuration to resume with; defaults to the config.toml of the
        /// run that wrote the checkpoint.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn print_summary(quiet: bool, dir: &std::path::Path, s: &harness::RunSummary) {
    if quiet {
        return;
    }
    println!("wrote {}", dir.display());
    println!(
        "t = {} after {} steps, {} snapshots; L2 {:.6e} -> {:.6e}",
        s.t_end, s.steps, s.snapshots, s.initial_norms.l2, s.final_norms.l2
    );
    println!(
        "max |R|/|psi0|^2 {:.3e}, mass drift {:.3e}, interpolation violations {}",
        s.max_relative_energy_residual, s.mass_drift, s.interpolation_violations
    );
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.as_deref();
    let quiet = cli.quiet;
    let result = match &cli.command {
        Command::Run { config } => harness::cmd_run(config, out).map(|(dir, s)| {
            print_summary(quiet, &dir, &s);
            0
        }),
        Command::Restart { checkpoint, config } => {
            harness::cmd_restart(checkpoint, config.as_deref(), out).map(|(dir, s)| {
                print_summary(quiet, &dir, &s);
                0
            })
        }
        Command::Sweep { dir } => harness::cmd_sweep(dir, out).map(|(base, entries)| {
            if !quiet {
                for e in &entries {
                    println!("[{}] {}: {}", e.exit_code, e.config, e.message);
                }
                println!("wrote {}", base.join("sweep.json").display());
            }
            entries.iter().map(|e| e.exit_code).max().unwrap_or(0)
        }),
        Command::Converge { config } => harness::cmd_converge(config, out).map(|(dir, r)| {
            if !quiet {
                println!("{:>12} {:>8} {:>24} {:>24}", "dt", "steps", "final L2", "diff to next");
                for row in &r.rows {
                    let diff = row.difference_to_next.map(|d| format!("{d:.6e}")).unwrap_or_default();
                    println!("{:>12} {:>8} {:>24.16e} {diff:>24}", row.dt, row.steps, row.final_l2);
                }
                println!("observed order {:.3}", r.observed_order);
                println!("wrote {}", dir.display());
            }
            0
        }),
        Command::Verify { suite } => harness::cmd_verify(suite, out).map(|(dir, outcomes)| {
            if !quiet {
                for o in &outcomes {
                    println!("{o}");
                }
                println!("wrote {}", dir.join("verify.json").display());
            }
            if outcomes.iter().all(|o| o.passed) {
                0
            } else {
                EXIT_VERIFY_FAILED
            }
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
