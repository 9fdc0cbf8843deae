use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// The point `(lambda, e2)` is not in the moduli space.
    #[error("({lambda}, {e2}) is not in the moduli space")]
    OutsideModuli { lambda: f64, e2: f64 },

    /// The operation requires a different region of the moduli space.
    #[error("region mismatch: expected {expected}, found {found}")]
    RegionMismatch {
        expected: &'static str,
        found: String,
    },

    /// The characteristic number is outside the admissible interval.
    #[error("q = {q} is outside the interval ({lo}, {hi})")]
    OutOfInterval { q: f64, lo: f64, hi: f64 },

    /// An iterative method stopped before reaching its tolerance.
    #[error("{method} did not converge (achieved error {achieved:e})")]
    NonConvergence { method: &'static str, achieved: f64 },

    /// A root search found no sign change.
    #[error("no bracket found: {0}")]
    NoBracket(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
