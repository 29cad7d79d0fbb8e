use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("integration failed at t = {t}: step size {step:e} underflowed")]
    IntegrationFailure { t: f64, step: f64 },

    #[error("no transition found for drive strength up to {cap}")]
    NoTransition { cap: f64 },

    #[error("ratio undefined: the state does not evolve over the window")]
    UndefinedRatio,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        Err(Error::NegativeTime(t))
    } else if !t.is_finite() {
        Err(invalid("t", "time must be finite"))
    } else {
        Ok(())
    }
}
