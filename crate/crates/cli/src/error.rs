use std::path::PathBuf;

use qnc_core::analytic::AnalyticError;
use qnc_core::circuit::{CircuitError, FormatError};
use qnc_core::error_models::ModelError;
use qnc_core::montecarlo::McError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    MonteCarlo(#[from] McError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config {}: {source}", path.display())]
    Config { path: PathBuf, source: serde_json::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn runtime(e: impl std::fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }

    /// Whether the fault lies with the arguments rather than the run.
    pub fn is_invalid_argument(&self) -> bool {
        fn model(e: &ModelError) -> bool {
            matches!(e, ModelError::OutOfRange { .. } | ModelError::UnreachableFidelity { .. })
        }
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::Config { .. } => true,
            CliError::Model(e) => model(e),
            CliError::Analytic(e) => match e {
                AnalyticError::FidelityOutOfRange(_) | AnalyticError::DegenerateMarginal(_) => true,
                AnalyticError::Model(m) => model(m),
                _ => false,
            },
            CliError::MonteCarlo(e) => match e {
                McError::InvalidConfig { .. } => true,
                McError::Model(m) => model(m),
                _ => false,
            },
            _ => false,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_invalid_argument() {
            2
        } else {
            3
        }
    }

    /// `error[kind]: message` on one line.
    pub fn line(&self) -> String {
        let kind = if self.is_invalid_argument() { "invalid-argument" } else { "runtime" };
        let msg = self.to_string().split_whitespace().collect::<Vec<_>>().join(" ");
        format!("error[{kind}]: {msg}")
    }
}
