// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

//! Experiment configuration. Every field is optional in the input file; task
//! presets fill in the rest, and the resolved form is echoed into outputs.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use ddme_core::control::{
    update_shape, CorrelationKernel, HamiltonianFamily, PulseSet, TimeGrid,
};
use ddme_core::krotov::KrotovConfig;
use ddme_core::quantum::{Complex64, DensityMatrix, Operator};
use ddme_core::ControlProblem;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, ConfigContext};

pub const DEFAULT_FINAL_TIME: f64 = 10.0;
pub const DEFAULT_STEPS: usize = 100;
pub const DEFAULT_C0: f64 = 0.01;
pub const DEFAULT_T_CORR: f64 = 100.0;
pub const DEFAULT_J_TOL: f64 = 0.003;
pub const DEFAULT_I_MAX: usize = 100;
pub const DEFAULT_SE_LAMBDA: f64 = 4.0;
pub const DEFAULT_SE_J_TOL: f64 = 1e-6;
pub const DEFAULT_SE_I_MAX: usize = 500;
pub const DEFAULT_ENSEMBLE_COUNT: usize = 4000;
pub const DEFAULT_SEED: u64 = 2026;
pub const DEFAULT_SWEEP_FRACTIONS: [f64; 5] = [0.05, 0.2, 0.6, 1.0, 1.4];
pub const DEFAULT_SWEEP_ITERATIONS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TaskName {
    /// |+⟩ → |−⟩, Gaussian guess.
    ZGate,
    /// |0⟩ → |1⟩, Gaussian guess, λ = 0.5.
    XGate,
    /// |0⟩ → |+⟩, sine guess, short ramps.
    Hadamard,
    /// States and guess come from the config file.
    Custom,
}

/// Hermitian operator as Pauli-string coefficients (`{"Z": 1.0, "XX": 0.5}`)
/// or an explicit matrix given row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    Pauli {
        pauli: BTreeMap<String, f64>,
    },
    Matrix {
        real: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        imag: Option<Vec<Vec<f64>>>,
    },
}

/// Qubit label (`"0"`, `"1"`, `"+"`, `"-"`, `"+i"`, `"-i"`), a ket of
/// `[re, im]` pairs, or a density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Label(String),
    Ket {
        ket: Vec<[f64; 2]>,
    },
    Matrix {
        real: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        imag: Option<Vec<Vec<f64>>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub drift: OperatorSpec,
    pub controls: Vec<OperatorSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub final_time: Option<f64>,
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    Zero,
    Gaussian {
        c0: Option<f64>,
        t_corr: Option<f64>,
    },
    WhiteNoise {
        alpha: f64,
    },
    /// Midpoint covariance `C_{(m,i),(n,j)}`, pulse-major.
    Tabulated {
        values: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GuessSpec {
    /// `amplitude · exp(−(t − center)² / (2 width²))`.
    Gaussian {
        center: Option<f64>,
        width: Option<f64>,
        amplitude: Option<f64>,
    },
    /// `amplitude · sin(πt/T)`.
    Sine { amplitude: Option<f64> },
    /// One row of midpoint samples per control.
    Tabulated { values: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KrotovSpec {
    pub lambda: Option<Vec<f64>>,
    pub j_tol: Option<f64>,
    pub i_max: Option<usize>,
    pub t_on: Option<f64>,
    pub t_off: Option<f64>,
}

/// Step sizes for the closed-system run; ramps are shared with `krotov`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeKrotovSpec {
    pub lambda: Option<Vec<f64>>,
    pub j_tol: Option<f64>,
    pub i_max: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSpec {
    pub count: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    /// Absolute correlation times.
    pub t_corr: Option<Vec<f64>>,
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Option<TaskName>,
    pub system: Option<SystemSpec>,
    pub initial_state: Option<StateSpec>,
    pub target_state: Option<StateSpec>,
    pub grid: GridSpec,
    pub kernel: Option<KernelSpec>,
    pub guess: Option<GuessSpec>,
    pub krotov: KrotovSpec,
    pub se_krotov: SeKrotovSpec,
    pub ensemble: EnsembleSpec,
    pub sweep: SweepSpec,
    pub output: Option<PathBuf>,
}

struct Preset {
    initial: &'static str,
    target: &'static str,
    sine_guess: bool,
    ramp: f64,
    lambda: f64,
}

fn preset(task: TaskName) -> Option<Preset> {
    let p = |initial, target, sine_guess, ramp, lambda| Preset {
        initial,
        target,
        sine_guess,
        ramp,
        lambda,
    };
    match task {
        TaskName::ZGate => Some(p("+", "-", false, 2.0, 1.25)),
        TaskName::XGate => Some(p("0", "1", false, 2.0, 0.5)),
        TaskName::Hadamard => Some(p("0", "+", true, 0.3, 1.25)),
        TaskName::Custom => None,
    }
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }

    /// Default configuration for one of the preset tasks.
    pub fn for_task(task: TaskName) -> Self {
        Self {
            task: Some(task),
            ..Self::default()
        }
    }

    /// Fills every unset field from the task preset and the global defaults.
    pub fn resolve(&self) -> Result<Self, CliError> {
        let task = self.task.unwrap_or(TaskName::ZGate);
        let preset = preset(task);
        let label = |s: &str| Some(StateSpec::Label(s.to_string()));

        let initial_state = match (&self.initial_state, &preset) {
            (Some(s), _) => Some(s.clone()),
            (None, Some(p)) => label(p.initial),
            (None, None) => return Err(CliError::config("custom task needs initial_state")),
        };
        let target_state = match (&self.target_state, &preset) {
            (Some(s), _) => Some(s.clone()),
            (None, Some(p)) => label(p.target),
            (None, None) => return Err(CliError::config("custom task needs target_state")),
        };
        let system = self.system.clone().unwrap_or_else(|| SystemSpec {
            drift: OperatorSpec::Pauli {
                pauli: BTreeMap::from([("Z".to_string(), 1.0)]),
            },
            controls: vec![OperatorSpec::Pauli {
                pauli: BTreeMap::from([("X".to_string(), 1.0)]),
            }],
        });
        let controls = system.controls.len();
        if controls == 0 {
            return Err(CliError::config("system needs at least one control"));
        }

        let final_time = self.grid.final_time.unwrap_or(DEFAULT_FINAL_TIME);
        let grid = GridSpec {
            final_time: Some(final_time),
            steps: Some(self.grid.steps.unwrap_or(DEFAULT_STEPS)),
        };
        let kernel = match self.kernel.clone() {
            None => KernelSpec::Gaussian {
                c0: Some(DEFAULT_C0),
                t_corr: Some(DEFAULT_T_CORR),
            },
            Some(KernelSpec::Gaussian { c0, t_corr }) => KernelSpec::Gaussian {
                c0: Some(c0.unwrap_or(DEFAULT_C0)),
                t_corr: Some(t_corr.unwrap_or(DEFAULT_T_CORR)),
            },
            Some(other) => other,
        };
        let sine = preset.as_ref().is_some_and(|p| p.sine_guess);
        let guess = match self.guess.clone() {
            None if sine => GuessSpec::Sine {
                amplitude: Some(1.0),
            },
            None => GuessSpec::Gaussian {
                center: Some(final_time / 2.0),
                width: Some(1.0),
                amplitude: Some(1.0),
            },
            Some(GuessSpec::Gaussian {
                center,
                width,
                amplitude,
            }) => GuessSpec::Gaussian {
                center: Some(center.unwrap_or(final_time / 2.0)),
                width: Some(width.unwrap_or(1.0)),
                amplitude: Some(amplitude.unwrap_or(1.0)),
            },
            Some(GuessSpec::Sine { amplitude }) => GuessSpec::Sine {
                amplitude: Some(amplitude.unwrap_or(1.0)),
            },
            Some(t @ GuessSpec::Tabulated { .. }) => t,
        };

        let ramp = preset.as_ref().map_or(0.0, |p| p.ramp);
        let lambda = preset.as_ref().map_or(1.0, |p| p.lambda);
        let krotov = KrotovSpec {
            lambda: Some(
                self.krotov
                    .lambda
                    .clone()
                    .unwrap_or_else(|| vec![lambda; controls]),
            ),
            j_tol: Some(self.krotov.j_tol.unwrap_or(DEFAULT_J_TOL)),
            i_max: Some(self.krotov.i_max.unwrap_or(DEFAULT_I_MAX)),
            t_on: Some(self.krotov.t_on.unwrap_or(ramp)),
            t_off: Some(self.krotov.t_off.unwrap_or(ramp)),
        };
        let se_krotov = SeKrotovSpec {
            lambda: Some(
                self.se_krotov
                    .lambda
                    .clone()
                    .unwrap_or_else(|| vec![DEFAULT_SE_LAMBDA; controls]),
            ),
            j_tol: Some(self.se_krotov.j_tol.unwrap_or(DEFAULT_SE_J_TOL)),
            i_max: Some(self.se_krotov.i_max.unwrap_or(DEFAULT_SE_I_MAX)),
        };
        let ensemble = EnsembleSpec {
            count: Some(self.ensemble.count.unwrap_or(DEFAULT_ENSEMBLE_COUNT)),
            seed: Some(self.ensemble.seed.unwrap_or(DEFAULT_SEED)),
        };
        let sweep = SweepSpec {
            t_corr: Some(self.sweep.t_corr.clone().unwrap_or_else(|| {
                DEFAULT_SWEEP_FRACTIONS
                    .iter()
                    .map(|f| f * final_time)
                    .collect()
            })),
            iterations: Some(self.sweep.iterations.unwrap_or(DEFAULT_SWEEP_ITERATIONS)),
        };

        Ok(Self {
            task: Some(task),
            system: Some(system),
            initial_state,
            target_state,
            grid,
            kernel: Some(kernel),
            guess: Some(guess),
            krotov,
            se_krotov,
            ensemble,
            sweep,
            output: Some(self.output.clone().unwrap_or_else(|| PathBuf::from("out"))),
        })
    }
}

/// Validated experiment, ready to run.
#[derive(Debug, Clone)]
pub struct Experiment {
    /// Fully resolved configuration.
    pub config: ExperimentConfig,
    pub problem: ControlProblem,
    pub guess: PulseSet,
    pub se: KrotovConfig,
    pub ddme: KrotovConfig,
    pub ensemble_count: usize,
    pub seed: u64,
    pub sweep_t_corr: Vec<f64>,
    pub sweep_iterations: usize,
}

impl Experiment {
    pub fn from_config(config: &ExperimentConfig) -> Result<Self, CliError> {
        let config = config.resolve()?;
        let missing = |what: &str| CliError::config(format!("unresolved field {what}"));

        let system = config.system.as_ref().ok_or_else(|| missing("system"))?;
        let drift = build_operator(&system.drift).map_err(|e| prefix("system.drift", e))?;
        let controls = system
            .controls
            .iter()
            .enumerate()
            .map(|(m, spec)| {
                build_operator(spec).map_err(|e| prefix(&format!("system.controls[{m}]"), e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let family = HamiltonianFamily::new(drift, controls).config_err("system")?;
        let count = family.control_count();

        let grid = TimeGrid::new(
            config.grid.final_time.ok_or_else(|| missing("grid.final_time"))?,
            config.grid.steps.ok_or_else(|| missing("grid.steps"))?,
        )
        .config_err("grid")?;

        let kernel = build_kernel(config.kernel.as_ref().ok_or_else(|| missing("kernel"))?)?;
        let rho0 = build_state(config.initial_state.as_ref().ok_or_else(|| missing("initial_state"))?)
            .map_err(|e| prefix("initial_state", e))?;
        let target = build_state(config.target_state.as_ref().ok_or_else(|| missing("target_state"))?)
            .map_err(|e| prefix("target_state", e))?;
        let problem = ControlProblem::new(rho0, target, family, grid, kernel).config_err("problem")?;
        // Reject kernels that cannot be sampled before any optimization runs.
        ddme_core::control::DisorderSampler::new(&problem.kernel, &grid, count)
            .config_err("kernel")?;

        let guess = build_guess(config.guess.as_ref().ok_or_else(|| missing("guess"))?, &grid, count)?;

        let k = &config.krotov;
        let shape = update_shape(
            &grid,
            k.t_on.ok_or_else(|| missing("krotov.t_on"))?,
            k.t_off.ok_or_else(|| missing("krotov.t_off"))?,
        )
        .config_err("krotov ramps")?;
        let shapes = vec![shape; count];
        let lambdas = k.lambda.clone().ok_or_else(|| missing("krotov.lambda"))?;
        check_len("krotov.lambda", lambdas.len(), count)?;
        let ddme = KrotovConfig::new(
            lambdas,
            shapes.clone(),
            k.j_tol.ok_or_else(|| missing("krotov.j_tol"))?,
            k.i_max.ok_or_else(|| missing("krotov.i_max"))?,
        )
        .config_err("krotov")?;

        let s = &config.se_krotov;
        let se_lambdas = s.lambda.clone().ok_or_else(|| missing("se_krotov.lambda"))?;
        check_len("se_krotov.lambda", se_lambdas.len(), count)?;
        let se = KrotovConfig::new(
            se_lambdas,
            shapes,
            s.j_tol.ok_or_else(|| missing("se_krotov.j_tol"))?,
            s.i_max.ok_or_else(|| missing("se_krotov.i_max"))?,
        )
        .config_err("se_krotov")?;

        let ensemble_count = config.ensemble.count.ok_or_else(|| missing("ensemble.count"))?;
        if ensemble_count == 0 {
            return Err(CliError::config("ensemble.count must be positive"));
        }
        let seed = config.ensemble.seed.ok_or_else(|| missing("ensemble.seed"))?;

        let sweep_t_corr = config.sweep.t_corr.clone().ok_or_else(|| missing("sweep.t_corr"))?;
        if sweep_t_corr.is_empty() {
            return Err(CliError::config("sweep.t_corr must list at least one correlation time"));
        }
        if let Some(bad) = sweep_t_corr.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(CliError::config(format!("sweep.t_corr entries must be positive, got {bad}")));
        }
        let sweep_iterations = config.sweep.iterations.ok_or_else(|| missing("sweep.iterations"))?;

        Ok(Self {
            config,
            problem,
            guess,
            se,
            ddme,
            ensemble_count,
            seed,
            sweep_t_corr,
            sweep_iterations,
        })
    }

    pub fn output_dir(&self) -> PathBuf {
        self.config.output.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    /// The sweep varies `t_corr` of a stationary Gaussian kernel.
    pub fn require_gaussian_kernel(&self) -> Result<(), CliError> {
        match self.config.kernel {
            Some(KernelSpec::Gaussian { .. }) => Ok(()),
            _ => Err(CliError::config("the correlation-time sweep needs a gaussian kernel")),
        }
    }
}

fn prefix(what: &str, e: CliError) -> CliError {
    match e {
        CliError::Config(msg) => CliError::config(format!("{what}: {msg}")),
        other => other,
    }
}

fn check_len(what: &str, found: usize, expected: usize) -> Result<(), CliError> {
    if found == expected {
        Ok(())
    } else {
        Err(CliError::config(format!(
            "{what} has {found} entries, expected one per control ({expected})"
        )))
    }
}

fn pauli_letter(c: char) -> Option<Operator> {
    match c {
        'I' => Some(Operator::identity(2)),
        'X' => Some(Operator::sigma_x()),
        'Y' => Some(Operator::sigma_y()),
        'Z' => Some(Operator::sigma_z()),
        _ => None,
    }
}

fn pauli_string(word: &str) -> Result<Operator, CliError> {
    let mut chars = word.chars();
    let first = chars
        .next()
        .ok_or_else(|| CliError::config("empty Pauli string"))?;
    let bad = || CliError::config(format!("invalid Pauli string {word:?}"));
    let mut op = pauli_letter(first).ok_or_else(bad)?;
    for c in chars {
        op = op.kron(&pauli_letter(c).ok_or_else(bad)?);
    }
    Ok(op)
}

fn complex_matrix(real: &[Vec<f64>], imag: Option<&[Vec<f64>]>) -> Result<DMatrix<Complex64>, CliError> {
    let n = real.len();
    if n == 0 || real.iter().any(|row| row.len() != n) {
        return Err(CliError::config("matrix must be square and non-empty"));
    }
    if let Some(im) = imag {
        if im.len() != n || im.iter().any(|row| row.len() != n) {
            return Err(CliError::config("imaginary part must match the real part's shape"));
        }
    }
    Ok(DMatrix::from_fn(n, n, |r, c| {
        Complex64::new(real[r][c], imag.map_or(0.0, |im| im[r][c]))
    }))
}

pub fn build_operator(spec: &OperatorSpec) -> Result<Operator, CliError> {
    match spec {
        OperatorSpec::Pauli { pauli } => {
            let mut terms = pauli.iter();
            let (word, coeff) = terms
                .next()
                .ok_or_else(|| CliError::config("Pauli expansion needs at least one term"))?;
            let mut op = pauli_string(word)?.scale_real(*coeff);
            for (word, coeff) in terms {
                let term = pauli_string(word)?;
                if term.dim() != op.dim() {
                    return Err(CliError::config(format!(
                        "Pauli string {word:?} acts on a different number of qubits"
                    )));
                }
                op.add_scaled(*coeff, &term);
            }
            Ok(op)
        }
        OperatorSpec::Matrix { real, imag } => {
            let m = complex_matrix(real, imag.as_deref())?;
            Operator::new(m).config_err("operator")
        }
    }
}

pub fn build_state(spec: &StateSpec) -> Result<DensityMatrix, CliError> {
    match spec {
        StateSpec::Label(label) => DensityMatrix::qubit_label(label).config_err("state"),
        StateSpec::Ket { ket } => {
            let amps: Vec<Complex64> = ket.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
            DensityMatrix::pure(&amps).config_err("state")
        }
        StateSpec::Matrix { real, imag } => {
            let m = complex_matrix(real, imag.as_deref())?;
            DensityMatrix::new(Operator::new(m).config_err("state")?).config_err("state")
        }
    }
}

fn build_kernel(spec: &KernelSpec) -> Result<CorrelationKernel, CliError> {
    match spec {
        KernelSpec::Zero => Ok(CorrelationKernel::zero()),
        KernelSpec::Gaussian { c0, t_corr } => CorrelationKernel::gaussian(
            c0.unwrap_or(DEFAULT_C0),
            t_corr.unwrap_or(DEFAULT_T_CORR),
        )
        .config_err("kernel"),
        KernelSpec::WhiteNoise { alpha } => CorrelationKernel::white_noise(*alpha).config_err("kernel"),
        KernelSpec::Tabulated { values } => {
            let n = values.len();
            if n == 0 || values.iter().any(|row| row.len() != n) {
                return Err(CliError::config("kernel: tabulated values must be square"));
            }
            let m = DMatrix::from_fn(n, n, |r, c| values[r][c]);
            CorrelationKernel::tabulated(m).config_err("kernel")
        }
    }
}

fn build_guess(spec: &GuessSpec, grid: &TimeGrid, count: usize) -> Result<PulseSet, CliError> {
    let total = grid.final_time();
    match spec {
        GuessSpec::Gaussian {
            center,
            width,
            amplitude,
        } => {
            let (c, w, a) = (
                center.unwrap_or(total / 2.0),
                width.unwrap_or(1.0),
                amplitude.unwrap_or(1.0),
            );
            if !(w > 0.0) {
                return Err(CliError::config(format!("guess width must be positive, got {w}")));
            }
            PulseSet::from_fn(grid, count, |_, t| a * (-(t - c).powi(2) / (2.0 * w * w)).exp())
                .config_err("guess")
        }
        GuessSpec::Sine { amplitude } => {
            let a = amplitude.unwrap_or(1.0);
            PulseSet::from_fn(grid, count, |_, t| a * (PI * t / total).sin()).config_err("guess")
        }
        GuessSpec::Tabulated { values } => {
            let pulses = PulseSet::new(values.clone()).config_err("guess")?;
            pulses.ensure_shape(count, grid.steps()).config_err("guess")?;
            Ok(pulses)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_task_definitions() {
        let z = Experiment::from_config(&ExperimentConfig::for_task(TaskName::ZGate)).unwrap();
        assert_eq!(z.problem.rho0, DensityMatrix::qubit_label("+").unwrap());
        assert_eq!(z.problem.target, DensityMatrix::qubit_label("-").unwrap());
        assert_eq!(z.ddme.lambdas, vec![1.25]);
        assert_eq!(z.ddme.shapes[0].t_on(), 2.0);
        assert_eq!(z.problem.grid.steps(), 100);
        assert_eq!(z.ensemble_count, 4000);
        assert!((z.guess.get(0, 49) - (-(4.95f64 - 5.0).powi(2) / 2.0).exp()).abs() < 1e-15);

        let x = Experiment::from_config(&ExperimentConfig::for_task(TaskName::XGate)).unwrap();
        assert_eq!(x.ddme.lambdas, vec![0.5]);
        assert_eq!(x.problem.target, DensityMatrix::qubit_label("1").unwrap());

        let h = Experiment::from_config(&ExperimentConfig::for_task(TaskName::Hadamard)).unwrap();
        assert_eq!(h.ddme.shapes[0].t_off(), 0.3);
        assert!((h.guess.get(0, 0) - (PI * 0.05 / 10.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn resolve_is_idempotent() {
        let once = ExperimentConfig::for_task(TaskName::Hadamard).resolve().unwrap();
        assert_eq!(once.resolve().unwrap(), once);
        let json = serde_json::to_string(&once).unwrap();
        assert_eq!(ExperimentConfig::from_json(&json).unwrap(), once);
    }

    #[test]
    fn custom_task_requires_states() {
        let cfg = ExperimentConfig::for_task(TaskName::Custom);
        assert!(matches!(cfg.resolve(), Err(CliError::Config(_))));
    }

    #[test]
    fn custom_system_from_pauli_and_matrix() {
        let json = r#"{
            "task": "custom",
            "system": {"drift": {"pauli": {"ZI": 1.0, "IZ": 0.5}},
                       "controls": [{"pauli": {"XI": 1.0}}, {"pauli": {"IX": 1.0}}]},
            "initial_state": {"ket": [[1,0],[0,0],[0,0],[0,0]]},
            "target_state": {"ket": [[0,0],[0,0],[0,0],[1,0]]},
            "krotov": {"lambda": [1.0, 1.0]},
            "se_krotov": {"lambda": [2.0, 2.0]}
        }"#;
        let exp = Experiment::from_config(&ExperimentConfig::from_json(json).unwrap()).unwrap();
        assert_eq!(exp.problem.dim(), 4);
        assert_eq!(exp.problem.control_count(), 2);

        let m = OperatorSpec::Matrix {
            real: vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            imag: Some(vec![vec![0.0, -1.0], vec![1.0, 0.0]]),
        };
        assert_eq!(build_operator(&m).unwrap(), Operator::sigma_y());
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for json in [
            r#"{"grid": {"steps": 0}}"#,
            r#"{"kernel": {"kind": "gaussian", "t_corr": -1}}"#,
            r#"{"krotov": {"lambda": [1.0, 2.0]}}"#,
            r#"{"krotov": {"j_tol": 2.0}}"#,
            r#"{"system": {"drift": {"pauli": {"Q": 1.0}}, "controls": [{"pauli": {"X": 1.0}}]}}"#,
            r#"{"initial_state": "5"}"#,
            r#"{"ensemble": {"count": 0}}"#,
            r#"{"sweep": {"t_corr": []}}"#,
            r#"{"unknown": 1}"#,
        ] {
            let err = ExperimentConfig::from_json(json).and_then(|c| Experiment::from_config(&c));
            assert!(matches!(err, Err(CliError::Config(_))), "{json}");
        }
    }
}
