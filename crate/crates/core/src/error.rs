use thiserror::Error;

use crate::instance::MetricViolation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("metric violation: {0}")]
    Metric(#[from] MetricViolation),

    #[error("profile shape mismatch: {0}")]
    ProfileShapeMismatch(String),

    #[error("operation needs explicit rational distances, but the instance only carries {0}")]
    MetricMissing(&'static str),

    #[error("resource augmentation parameter must be at least 1, got {0}")]
    AlphaOutOfRange(String),

    #[error("coalition enumeration over {n} voters exceeds the cap of {cap}")]
    EnumerationCapExceeded { n: usize, cap: usize },

    #[error("t range {lo}..{hi} is not contained in 1..{k}")]
    InvalidTRange { lo: usize, hi: usize, k: usize },

    #[error("committee is invalid: {0}")]
    InvalidCommittee(String),

    #[error("1/(alpha-1) must be an integer for this family, got alpha = {0}")]
    NonIntegralK(String),

    #[error("family needs k <= n/4, got n = {n}, k = {k}")]
    KTooLarge { n: usize, k: usize },

    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
