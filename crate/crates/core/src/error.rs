use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("conjugate gradient stopped after {iterations} iterations with relative residual {residual:.3e}")]
    Solver { iterations: usize, residual: f64 },

    #[error("quadrature accuracy {achieved:.3e} exceeds tolerance {tolerance:.3e}")]
    Accuracy { achieved: f64, tolerance: f64 },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("index {index} out of range for length {len}")]
    Index { index: usize, len: usize },

    #[error("discrete solution left the bounded regime at step {step} (max norm {max_norm:.3e})")]
    BlowUp { step: usize, max_norm: f64 },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        name,
        reason: reason.into(),
    }
}

/// Checks `alpha ∈ (0, 1)`.
pub(crate) fn check_order(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(param("alpha", format!("order must lie in (0, 1), got {alpha}")))
    }
}
