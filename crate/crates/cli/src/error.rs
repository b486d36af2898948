// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const IO: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const NOT_CONVERGED: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[source] ddme_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => exit::CONFIG,
            Self::Numerical(_) => exit::NUMERICAL,
            Self::Io { .. } | Self::Format { .. } => exit::IO,
        }
    }
}

/// Library errors raised while building inputs are configuration errors;
/// the same errors during a computation are numerical failures.
pub(crate) trait ConfigContext<T> {
    fn config_err(self, what: &str) -> Result<T, CliError>;
}

impl<T> ConfigContext<T> for ddme_core::Result<T> {
    fn config_err(self, what: &str) -> Result<T, CliError> {
        self.map_err(|e| CliError::Config(format!("{what}: {e}")))
    }
}

pub(crate) trait NumericalContext<T> {
    fn numerical(self) -> Result<T, CliError>;
}

impl<T> NumericalContext<T> for ddme_core::Result<T> {
    fn numerical(self) -> Result<T, CliError> {
        self.map_err(CliError::Numerical)
    }
}
