// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: JSON experiment files, the optimize / sweep /
//! compare pipelines and their CSV and JSON outputs.

pub mod app;
pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;

pub use app::{run, Cli, Command};
pub use config::{Experiment, ExperimentConfig, TaskName};
pub use error::{exit, CliError};
pub use pipeline::{run_sweep, run_task, Summary, TaskOutcome};
