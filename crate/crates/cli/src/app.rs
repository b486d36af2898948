// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ddme_core::propagation::Trajectory;

use crate::config::{Experiment, ExperimentConfig, TaskName};
use crate::error::{exit, CliError};
use crate::output::{write_json, write_trajectory_csv, PulseRef};
use crate::pipeline::{compare, create_dir, diagnostics, run_sweep, run_task};

#[derive(Debug, Parser)]
#[command(name = "ddme", version, about = "Robust pulse optimization with the DDME-Krotov method")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// SE-Krotov, then DDME-Krotov, then master-equation and ensemble checks.
    Optimize {
        #[command(flatten)]
        common: Common,
        /// Maximum DDME-Krotov iterations.
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Propagate a pulse with the master equation.
    Propagate {
        #[command(flatten)]
        common: Common,
        /// Pulse CSV as `path#column` (column defaults to f_ddme).
        #[arg(long)]
        pulses: String,
    },
    /// Average unitary evolutions over sampled pulse perturbations.
    Ensemble {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pulses: String,
    },
    /// Fixed-length DDME-Krotov runs for several correlation times.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated absolute correlation times.
        #[arg(long, value_delimiter = ',')]
        t_corr: Option<Vec<f64>>,
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Master and ensemble metrics for two pulses side by side.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON experiment file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Preset task; overrides the file's task.
    #[arg(long, value_enum)]
    pub task: Option<TaskName>,
    /// Ensemble seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, CliError> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_path(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(task) = self.task {
            config.task = Some(task);
        }
        if config.task.is_none() && config.system.is_none() {
            return Err(CliError::config("pass --task or a --config file"));
        }
        if let Some(seed) = self.seed {
            config.ensemble.seed = Some(seed);
        }
        if let Some(out) = &self.out {
            config.output = Some(out.clone());
        }
        Ok(config)
    }
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Optimize { common, iterations } => {
            let mut config = common.load()?;
            if iterations.is_some() {
                config.krotov.i_max = iterations;
            }
            let exp = Experiment::from_config(&config)?;
            let dir = exp.output_dir();
            let outcome = run_task(&exp)?;
            let summary = outcome.write(&exp, &dir)?;
            for note in diagnostics(&summary) {
                eprintln!("warning: {note}");
            }
            println!(
                "F_SE = {:.6}  F_DDME = {:.6}  purity_DDME = {:.6}  iterations = {}  -> {}",
                summary.final_fidelity_se,
                summary.final_fidelity_ddme,
                summary.final_purity_ddme,
                summary.iterations,
                dir.display()
            );
            if summary.converged {
                Ok(exit::SUCCESS)
            } else {
                eprintln!(
                    "DDME-Krotov stopped at {} iterations with J_T = {:.6e}",
                    summary.iterations, summary.final_cost_ddme
                );
                Ok(exit::NOT_CONVERGED)
            }
        }
        Command::Propagate { common, pulses } => {
            single_pulse(&common, &pulses, "master", |exp, p| {
                ddme_core::propagation::ddme_propagate(&exp.problem, p).map_err(CliError::Numerical)
            })
        }
        Command::Ensemble { common, pulses } => {
            single_pulse(&common, &pulses, "ensemble", |exp, p| {
                ddme_core::propagation::ensemble_average(&exp.problem, p, exp.ensemble_count, exp.seed)
                    .map_err(CliError::Numerical)
            })
        }
        Command::Sweep {
            common,
            t_corr,
            iterations,
        } => {
            let mut config = common.load()?;
            if t_corr.is_some() {
                config.sweep.t_corr = t_corr;
            }
            if iterations.is_some() {
                config.sweep.iterations = iterations;
            }
            let exp = Experiment::from_config(&config)?;
            let dir = exp.output_dir();
            let outcome = run_sweep(&exp)?;
            outcome.write(&dir)?;
            for s in &outcome.series {
                let last = s.costs.last().copied().unwrap_or(f64::NAN);
                if last < 0.0 {
                    eprintln!(
                        "warning: t_corr = {}: J_T = {last:.3e} is negative, the truncated master equation lost positivity",
                        s.t_corr
                    );
                }
                println!("t_corr = {:<10} J_T = {:.6e}", s.t_corr, last);
            }
            Ok(exit::SUCCESS)
        }
        Command::Compare { common, a, b } => {
            let exp = Experiment::from_config(&common.load()?)?;
            let count = exp.problem.family.control_count();
            let grid = exp.problem.grid;
            let (ra, rb) = (PulseRef::parse(&a), PulseRef::parse(&b));
            let pa = ra.read(&grid, count)?;
            let pb = rb.read(&grid, count)?;
            let report = compare(&exp, (&a, &pa), (&b, &pb))?;
            let dir = exp.output_dir();
            create_dir(&dir)?;
            write_json(&dir.join("compare.json"), &report)?;
            println!(
                "F_a = {:.6}  F_b = {:.6}  gap = {:+.3e}",
                report.a.metrics.final_fidelity,
                report.b.metrics.final_fidelity,
                report.fidelity_gap
            );
            Ok(exit::SUCCESS)
        }
    }
}

fn single_pulse(
    common: &Common,
    pulses: &str,
    kind: &str,
    propagate: impl Fn(&Experiment, &ddme_core::control::PulseSet) -> Result<Trajectory, CliError>,
) -> Result<i32, CliError> {
    let exp = Experiment::from_config(&common.load()?)?;
    let pref = PulseRef::parse(pulses);
    let set = pref.read(&exp.problem.grid, exp.problem.family.control_count())?;
    let traj = propagate(&exp, &set)?;
    let dir = exp.output_dir();
    create_dir(&dir)?;
    let path = dir.join(format!("trajectory_{}_{kind}.csv", pref.label()));
    write_trajectory_csv(&path, &traj)?;
    report_trajectory(&traj, &path);
    Ok(exit::SUCCESS)
}

fn report_trajectory(traj: &Trajectory, path: &Path) {
    if traj.min_eigenvalue() < -ddme_core::quantum::NEGATIVITY_TOL {
        eprintln!(
            "warning: state has eigenvalue {:.3e}",
            traj.min_eigenvalue()
        );
    }
    println!(
        "F = {:.6}  purity = {:.6}  min purity = {:.6}  -> {}",
        traj.final_fidelity(),
        traj.final_purity(),
        traj.min_purity(),
        path.display()
    );
}
