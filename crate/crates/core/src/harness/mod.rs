//! Command surface: configuration, CSV output and the five commands
//! (`evolve`, `figures`, `sweep`, `validate`, `positivity`).
//!
//! All file I/O in the crate lives under this module. Exit codes follow
//! [`HarnessError::exit_code`]: 0 success, 1 validation failure, 2 usage or
//! configuration error, 3 positivity rejection.

pub mod cli;
pub mod config;
pub mod evolve;
pub mod figures;
pub mod format;
pub mod positivity;
pub mod sweep;
pub mod validate;

use thiserror::Error;

use crate::error::Error;

pub use config::{CouplingSource, Engine, GeneratorKind, RawConfig, RunConfig, StateSource};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("positivity: {0}")]
    Positivity(String),

    #[error(transparent)]
    Model(#[from] Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 1,
            Self::Usage(_) | Self::Io(_) => 2,
            Self::Positivity(_) | Self::Model(Error::Positivity { .. }) => 3,
            Self::Model(_) => 2,
        }
    }
}

pub type HarnessResult<T> = std::result::Result<T, HarnessError>;

/// `samples` uniformly spaced points on `[0, t_end]`, both ends included.
pub fn uniform_grid(t_end: f64, samples: usize) -> Vec<f64> {
    let last = samples - 1;
    (0..samples)
        .map(|k| {
            if k == last {
                t_end
            } else {
                t_end * k as f64 / last as f64
            }
        })
        .collect()
}
