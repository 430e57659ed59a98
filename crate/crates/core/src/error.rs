//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid partition: cannot split {dim} coordinates into {blocks} blocks")]
    InvalidPartition { dim: usize, blocks: usize },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("solver diverged at iteration {iteration}: {context}")]
    Diverged { iteration: usize, context: &'static str },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("step cap must be positive, got {0}")]
    InvalidCap(f64),

    #[error("lambda {lambda} violates lambda < 1/rho with rho = {rho}")]
    InvalidLambda { lambda: f64, rho: f64 },

    #[error("matrix is rank deficient (smallest Gram eigenvalue {0:.3e})")]
    RankDeficient(f64),

    #[error("bound is not representable in f64 (exponent overflow)")]
    BoundOverflow,

    #[error("empty trace: the run performed no iterations")]
    EmptyTrace,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
