use thiserror::Error;

use crate::algebra::Mode;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid ray: {0}")]
    InvalidRay(String),

    #[error("cone is not smooth: {0}")]
    NotSmooth(String),

    #[error("invalid input at {location}: {message}")]
    Input { location: String, message: String },

    #[error("cannot combine {left:?} and {right:?} values")]
    ModeMismatch { left: Mode, right: Mode },

    #[error("{0}")]
    ModeViolation(String),

    #[error("unsupported fan: {0}")]
    UnsupportedFan(String),

    #[error("no ordering found: {0}")]
    OrderNotFound(String),

    #[error("search inconclusive after {nodes} nodes")]
    SearchInconclusive { nodes: u64 },

    #[error("reduction budget of {budget} steps exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("freeness violation: {0}")]
    FreenessViolation(String),

    #[error("specialization error: {0}")]
    Specialization(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn input(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Input { location: location.into(), message: message.into() }
    }
}
