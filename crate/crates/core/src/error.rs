use thiserror::Error;

/// Errors produced by the estimation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeError {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// A sample violated the invariants required for fitting.
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    /// A root finder was handed an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}] (f = {f_lo}, {f_hi})")]
    Bracketing {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// The objective produced a non-finite value where a finite one was required.
    #[error("objective is not finite at {at:?}")]
    NonFinite { at: Vec<f64> },

    /// An estimator could not produce a fit.
    #[error("{method} fit failed: {detail}")]
    FitFailure { method: String, detail: String },

    /// A matrix was singular or too badly conditioned to invert.
    #[error("ill-conditioned matrix (condition number {condition:e}): {detail}")]
    IllConditioned { condition: f64, detail: String },

    /// An integral that would be needed does not converge for these parameters.
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// Too many bootstrap or Monte Carlo replicates failed.
    #[error("{failed} of {total} replicates failed: {detail}")]
    ReplicateFailures {
        failed: usize,
        total: usize,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, GeError>;

pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> GeError {
    GeError::Domain {
        what,
        detail: detail.into(),
    }
}
