//! Error type shared by every module of the crate.

use crate::bollobas::BollobasTrace;

/// Crate-wide error enum. Variants are named after the condition they report,
/// not after the operation that raised them.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} = {value} is outside its admissible domain")]
    OutOfDomain { what: &'static str, value: f64 },

    #[error("lp space with p = {p} is not uniformly convex")]
    NotUniformlyConvex { p: f64 },

    #[error("no convergence in {what}")]
    NoConvergence { what: &'static str },

    #[error("index {index} out of range (max {max})")]
    OutOfRange { index: usize, max: usize },

    #[error("functional has dual norm {norm}, expected 1")]
    NotUnitFunctional { norm: f64 },

    #[error("zero polynomial cannot be normalized")]
    ZeroPolynomial,

    #[error("weighted profile has no positive maximum for n = {n}")]
    NonPositiveMax { n: usize },

    #[error("hypothesis violated: {detail}")]
    HypothesisViolated { detail: String },

    #[error("guarantee failed after run: {detail}")]
    GuaranteeFailed {
        detail: String,
        trace: Box<BollobasTrace>,
    },

    #[error("monitor violation: {detail}")]
    MonitorViolation { detail: String },

    #[error("inequality violated: {detail}")]
    InequalityViolated { detail: String },

    #[error("verification failed at clause {clause}: {detail}")]
    VerificationFailed { clause: String, detail: String },

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
