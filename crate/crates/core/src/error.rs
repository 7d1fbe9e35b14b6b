use thiserror::Error;

use crate::units::Regime;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "source energy equals the step height (E0 = V0 = {0}); neither solution branch applies"
    )]
    DegenerateScenario(f64),

    #[error("operation requires the {expected} regime but the scenario is {actual}")]
    WrongRegime { expected: Regime, actual: Regime },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("argument outside the supported domain: {0}")]
    OutOfDomain(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("no interior maximum: {0}")]
    NoInteriorMaximum(String),

    #[error("grid preflight failed: {0}")]
    Preflight(String),

    #[error("contour crosses a singularity: {0}")]
    ContourCrossing(String),

    #[error("tridiagonal solve broke down at row {0}")]
    SolverBreakdown(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NonFinite(name));
    }
    if value <= 0.0 {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must be > 0, got {value}"),
        });
    }
    Ok(value)
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NonFinite(name));
    }
    if value < 0.0 {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must be >= 0, got {value}"),
        });
    }
    Ok(value)
}
