use thiserror::Error;

/// Failures raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A computation produced a value that cannot be trusted (branch cut hit,
    /// non-finite result, failed self-check).
    #[error("numerical error: {0}")]
    Numerical(String),
    /// An iterative or refinement check did not reach its tolerance.
    #[error("convergence error: {what} (achieved {achieved:.3e}, required {required:.3e})")]
    Convergence {
        what: String,
        achieved: f64,
        required: f64,
    },
    /// Array lengths or grid metadata disagree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
