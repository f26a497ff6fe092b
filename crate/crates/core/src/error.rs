use thiserror::Error;

use crate::model::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("table size {size} exceeds cap {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("behavior failed validation: {0}")]
    Validation(Box<ValidationReport>),

    #[error("party {party} is not dichotomic ({outcomes} outcomes)")]
    NotDichotomic { party: usize, outcomes: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("weights are not a probability distribution (sum {sum})")]
    BadWeights { sum: f64 },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("observable is not involutive (||O^2 - I|| = {0:e})")]
    NotInvolutive(f64),

    #[error("state is not pure (largest eigenvalue {0})")]
    NotPure(f64),

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("linear program is malformed: {0}")]
    MalformedProgram(String),

    #[error("simplex numerical breakdown in phase {phase} after {iterations} pivots: {detail}")]
    Numerical {
        phase: u8,
        iterations: usize,
        detail: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
