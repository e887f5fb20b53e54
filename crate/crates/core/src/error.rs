use thiserror::Error;

/// Errors raised across the lab.
///
/// Axiom failures are reported as data (see `hhs::axioms::AxiomReport`);
/// the variants here are for conditions that stop an operation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("input error: {0}")]
    Input(String),

    #[error(
        "resource budget exceeded after completing radius {completed_radius} ({elements} elements)"
    )]
    Resource {
        completed_radius: usize,
        elements: usize,
    },

    #[error("wrong space kind: expected {expected}, found {found}")]
    WrongKind { expected: String, found: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("structure invalid: {message} (witness: {witness})")]
    StructureInvalid { message: String, witness: String },

    #[error("index mismatch: expected {expected} cosets, coset table closed at {found}")]
    IndexMismatch { expected: usize, found: usize },

    #[error("certificate refuted: {message} (witness: {witness})")]
    Refuted { message: String, witness: String },

    #[error("classification anomaly: {0}")]
    Anomaly(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("search exhausted: {0}")]
    RadiusExhausted(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, LabError>;

impl LabError {
    pub(crate) fn invalid(message: impl Into<String>, witness: impl Into<String>) -> Self {
        LabError::StructureInvalid {
            message: message.into(),
            witness: witness.into(),
        }
    }

    pub(crate) fn refuted(message: impl Into<String>, witness: impl Into<String>) -> Self {
        LabError::Refuted {
            message: message.into(),
            witness: witness.into(),
        }
    }
}
