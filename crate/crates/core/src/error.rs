use thiserror::Error;

use crate::capacity::CapacityResult;

/// Errors produced by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet must contain at least one label")]
    EmptyAlphabet,
    #[error("duplicate label `{0}` in alphabet")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("weight at index {index} is negative or not finite ({value})")]
    NegativeWeight { index: usize, value: f64 },
    #[error("all weights are zero")]
    AllZeroWeights,
    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("support violation at `{0}`: p > 0 where q = 0")]
    SupportViolation(String),
    #[error("sample batch is empty")]
    EmptySample,
    #[error("power iteration did not converge within {0} iterations")]
    NonConvergence(usize),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("label `{0}` appears in more than one block")]
    Overlap(String),
    #[error("label `{0}` is not covered by any block")]
    Uncovered(String),
    #[error("partition blocks must be non-empty")]
    EmptyBlock,
    #[error("partition base does not match: {0}")]
    BaseMismatch(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Blahut-Arimoto stopped after {} iterations with gap {}", .0.iterations, .0.gap)]
    MaxIterationsExceeded(Box<CapacityResult>),
    #[error("invalid collision scenario: {0}")]
    InvalidScenario(String),
    #[error("grid has {0} cells, above the limit of 1000000")]
    GridTooLarge(u128),
    #[error("empty range for `{0}`")]
    EmptyRange(String),
    #[error("design problem has no candidates")]
    NoCandidates,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
