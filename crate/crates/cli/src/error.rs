use std::io;

use hyperarea_core::kappa::KappaError;
use hyperarea_core::observables::ObservableError;
use hyperarea_core::{DiagramError, PiercingError};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}: {message}")]
    Document { origin: String, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("input is not a valid time-like hyperlink ({0} violations)")]
    Invalid(usize),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Document { .. } | CliError::Io { .. } | CliError::Usage(_) => EXIT_MALFORMED,
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
        }
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        CliError::Degenerate(e.to_string())
    }
}

impl From<PiercingError> for CliError {
    fn from(e: PiercingError) -> Self {
        CliError::Degenerate(e.to_string())
    }
}

impl From<ObservableError> for CliError {
    fn from(e: ObservableError) -> Self {
        match e {
            ObservableError::Diagram(d) => d.into(),
            ObservableError::Piercing(p) => p.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<KappaError> for CliError {
    fn from(e: KappaError) -> Self {
        match e {
            KappaError::Diagram(d) => d.into(),
            KappaError::Piercing(p) => p.into(),
            KappaError::Observable(o) => o.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}
