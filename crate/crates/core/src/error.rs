use thiserror::Error;

/// Errors raised by the models, samplers and integrators in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("power-law path gain is singular at r = 0")]
    Singularity,

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("quadrature did not converge (estimate {estimate:e}, error {error:e})")]
    Convergence { estimate: f64, error: f64 },

    #[error("all {trials} trials were blocked")]
    AllBlocked { trials: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
