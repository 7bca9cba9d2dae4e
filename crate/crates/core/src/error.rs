use thiserror::Error;

use crate::gausscode::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: expected {expected}, found {found}")]
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("invalid Gauss code: {0}")]
    Invalid(ValidationReport),
    #[error("diagram is not connected")]
    NotConnected,
    #[error("diagram is not reduced (label {0} forms a monogon)")]
    NotReduced(u32),
    #[error("component {0} has no crossings")]
    EmptyComponent(usize),
    #[error("operation is undefined for generalized Gauss codes")]
    GeneralizedCodeUnsupported,
    #[error("code has no components")]
    EmptyDiagram,
    #[error("move precondition failed: {0}")]
    MovePreconditionFailed(String),
    #[error("stale reference: {0}")]
    StaleReference(String),
    #[error("unknown crossing label {0}")]
    UnknownLabel(u32),
    #[error("code is not realizable as a classical diagram")]
    NotRealizable,
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("primeification stalled: {0}")]
    ProgressStalled(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::Invalid(_) => "ValidationError",
            Error::NotConnected => "NotConnected",
            Error::NotReduced(_) => "NotReduced",
            Error::EmptyComponent(_) => "EmptyComponent",
            Error::GeneralizedCodeUnsupported => "GeneralizedCodeUnsupported",
            Error::EmptyDiagram => "EmptyDiagram",
            Error::MovePreconditionFailed(_) => "MovePreconditionFailed",
            Error::StaleReference(_) => "StaleReference",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::NotRealizable => "NotRealizable",
            Error::UnsupportedFormat(_) => "UnsupportedFormat",
            Error::ProgressStalled(_) => "ProgressStalled",
            Error::Io { .. } => "IoError",
        }
    }

    /// True for errors caused by malformed input text or an invalid code.
    pub fn io(path: &std::path::Path, err: &std::io::Error) -> Self {
        Error::Io { path: path.display().to_string(), message: err.to_string() }
    }

    /// True for a failed internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::ProgressStalled(_))
    }

    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::Invalid(_) | Error::Io { .. })
    }
}
