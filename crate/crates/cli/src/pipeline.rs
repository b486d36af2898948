// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use ddme_core::control::PulseSet;
use ddme_core::krotov::{ddme_krotov, run_correlation_sweep, se_krotov, OptimizationTrace, SweepSeries};
use ddme_core::propagation::{ddme_propagate, ensemble_average, Trajectory};
use ddme_core::quantum::NEGATIVITY_TOL;
use serde::Serialize;

use crate::config::{ExperimentConfig, Experiment};
use crate::error::{CliError, NumericalContext};
use crate::output::{
    write_json, write_pulses_csv, write_sweep_csv, write_trace_csv, write_trajectory_csv,
};

/// Master-equation and ensemble evaluation of one pulse set.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub master: Trajectory,
    pub ensemble: Trajectory,
}

impl Evaluation {
    pub fn new(exp: &Experiment, pulses: &PulseSet) -> Result<Self, CliError> {
        let master = ddme_propagate(&exp.problem, pulses).numerical()?;
        let ensemble =
            ensemble_average(&exp.problem, pulses, exp.ensemble_count, exp.seed).numerical()?;
        Ok(Self { master, ensemble })
    }

    pub fn metrics(&self) -> Result<PulseMetrics, CliError> {
        Ok(PulseMetrics {
            final_fidelity: self.master.final_fidelity(),
            final_purity: self.master.final_purity(),
            min_purity: self.master.min_purity(),
            min_eigenvalue: self.master.min_eigenvalue(),
            final_fidelity_ensemble: self.ensemble.final_fidelity(),
            final_purity_ensemble: self.ensemble.final_purity(),
            max_trace_distance_master_vs_ensemble: self
                .master
                .max_trace_distance(&self.ensemble)
                .numerical()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PulseMetrics {
    pub final_fidelity: f64,
    pub final_purity: f64,
    pub min_purity: f64,
    /// Smallest eigenvalue over the master-equation trajectory; negative
    /// values mean the truncated master equation left the state space.
    pub min_eigenvalue: f64,
    pub final_fidelity_ensemble: f64,
    pub final_purity_ensemble: f64,
    pub max_trace_distance_master_vs_ensemble: f64,
}

/// Everything produced by the full pipeline.
#[derive(Debug, Clone)]
pub struct TaskOutcome {
    pub se: OptimizationTrace,
    pub ddme: OptimizationTrace,
    pub se_eval: Evaluation,
    pub ddme_eval: Evaluation,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub final_fidelity_se: f64,
    pub final_fidelity_ddme: f64,
    pub final_purity_se: f64,
    pub final_purity_ddme: f64,
    pub min_purity_se: f64,
    pub min_purity_ddme: f64,
    pub max_trace_distance_master_vs_ensemble: f64,
    pub iterations: usize,
    pub converged: bool,
    pub initial_cost_ddme: f64,
    pub final_cost_ddme: f64,
    /// Iterations after which `J_T` increased.
    pub cost_increases: Vec<usize>,
    pub se_iterations: usize,
    pub se_converged: bool,
    pub se_final_cost: f64,
    pub se: PulseMetrics,
    pub ddme: PulseMetrics,
    pub config: ExperimentConfig,
}

/// SE-Krotov from the guess, DDME-Krotov from the SE pulse, then master and
/// ensemble evaluation of both optimized pulses.
pub fn run_task(exp: &Experiment) -> Result<TaskOutcome, CliError> {
    let se = se_krotov(&exp.problem, &exp.guess, &exp.se).numerical()?;
    let ddme = ddme_krotov(&exp.problem, &se.pulses, &exp.ddme).numerical()?;
    let se_eval = Evaluation::new(exp, &se.pulses)?;
    let ddme_eval = Evaluation::new(exp, &ddme.pulses)?;
    Ok(TaskOutcome {
        se,
        ddme,
        se_eval,
        ddme_eval,
    })
}

impl TaskOutcome {
    pub fn summary(&self, exp: &Experiment) -> Result<Summary, CliError> {
        let se = self.se_eval.metrics()?;
        let ddme = self.ddme_eval.metrics()?;
        Ok(Summary {
            final_fidelity_se: se.final_fidelity,
            final_fidelity_ddme: ddme.final_fidelity,
            final_purity_se: se.final_purity,
            final_purity_ddme: ddme.final_purity,
            min_purity_se: se.min_purity,
            min_purity_ddme: ddme.min_purity,
            max_trace_distance_master_vs_ensemble: se
                .max_trace_distance_master_vs_ensemble
                .max(ddme.max_trace_distance_master_vs_ensemble),
            iterations: self.ddme.iterations,
            converged: self.ddme.converged,
            initial_cost_ddme: self.ddme.costs[0],
            final_cost_ddme: self.ddme.final_cost(),
            cost_increases: self.ddme.cost_increases(),
            se_iterations: self.se.iterations,
            se_converged: self.se.converged,
            se_final_cost: self.se.final_cost(),
            se,
            ddme,
            config: exp.config.clone(),
        })
    }

    pub fn write(&self, exp: &Experiment, dir: &Path) -> Result<Summary, CliError> {
        create_dir(dir)?;
        let grid = &exp.problem.grid;
        write_pulses_csv(
            &dir.join("pulses.csv"),
            grid,
            &[
                ("f_guess", &exp.guess),
                ("f_se", &self.se.pulses),
                ("f_ddme", &self.ddme.pulses),
            ],
        )?;
        for (name, eval) in [("se", &self.se_eval), ("ddme", &self.ddme_eval)] {
            write_trajectory_csv(&dir.join(format!("trajectory_{name}_master.csv")), &eval.master)?;
            write_trajectory_csv(
                &dir.join(format!("trajectory_{name}_ensemble.csv")),
                &eval.ensemble,
            )?;
        }
        write_trace_csv(&dir.join("optimization_trace.csv"), &self.ddme.costs)?;
        let summary = self.summary(exp)?;
        write_json(&dir.join("summary.json"), &summary)?;
        Ok(summary)
    }
}

/// Warnings for outcomes that are reported rather than treated as errors.
pub fn diagnostics(summary: &Summary) -> Vec<String> {
    let mut notes = Vec::new();
    if !summary.cost_increases.is_empty() {
        notes.push(format!(
            "J_T increased after iteration(s) {:?}",
            summary.cost_increases
        ));
    }
    for (name, m) in [("se", &summary.se), ("ddme", &summary.ddme)] {
        if m.min_eigenvalue < -NEGATIVITY_TOL {
            notes.push(format!(
                "{name} pulse: master-equation state has eigenvalue {:.3e}",
                m.min_eigenvalue
            ));
        }
    }
    if !summary.se_converged {
        notes.push("SE-Krotov did not reach its tolerance".into());
    }
    notes
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub se: OptimizationTrace,
    pub series: Vec<SweepSeries>,
}

/// Fixed-length DDME-Krotov runs from the SE-optimized pulse, one per
/// correlation time.
pub fn run_sweep(exp: &Experiment) -> Result<SweepOutcome, CliError> {
    exp.require_gaussian_kernel()?;
    let se = se_krotov(&exp.problem, &exp.guess, &exp.se).numerical()?;
    let series = run_correlation_sweep(
        &exp.problem,
        &se.pulses,
        &exp.ddme,
        &exp.sweep_t_corr,
        exp.sweep_iterations,
    )
    .numerical()?;
    Ok(SweepOutcome { se, series })
}

impl SweepOutcome {
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        create_dir(dir)?;
        write_sweep_csv(&dir.join("sweep.csv"), &self.series)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LabeledMetrics {
    pub label: String,
    #[serde(flatten)]
    pub metrics: PulseMetrics,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub a: LabeledMetrics,
    pub b: LabeledMetrics,
    pub fidelity_gap: f64,
    pub config: ExperimentConfig,
}

/// Side-by-side master and ensemble metrics for two pulse sets.
pub fn compare(
    exp: &Experiment,
    a: (&str, &PulseSet),
    b: (&str, &PulseSet),
) -> Result<CompareReport, CliError> {
    let ma = Evaluation::new(exp, a.1)?.metrics()?;
    let mb = Evaluation::new(exp, b.1)?.metrics()?;
    Ok(CompareReport {
        fidelity_gap: mb.final_fidelity - ma.final_fidelity,
        a: LabeledMetrics {
            label: a.0.to_string(),
            metrics: ma,
        },
        b: LabeledMetrics {
            label: b.0.to_string(),
            metrics: mb,
        },
        config: exp.config.clone(),
    })
}

pub fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}
