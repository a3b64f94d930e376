use thiserror::Error;

/// Errors raised by the core algorithms.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QfiError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0} requires |h| < 1; no critical momentum exists for h = {1}")]
    NoCriticalPoint(&'static str, f64),

    #[error("mode k = {k} is at an exceptional point (|epsilon| = {eps_abs:e})")]
    ExceptionalPoint { k: f64, eps_abs: f64 },

    #[error("critical coefficient diverges at gamma = gamma_c = {gamma_c}")]
    DivergentAtCritical { gamma_c: f64 },

    #[error("degenerate Hermitian ground state ({zero_modes} zero modes); request the lifted choice explicitly")]
    DegenerateGroundState { zero_modes: usize },

    #[error("quadrature did not converge: estimated relative error {achieved:e} > {requested:e}")]
    QuadratureNotConverged { achieved: f64, requested: f64 },

    #[error("Gaussian state lost rank at step {step} (smallest R diagonal {min_diag:e})")]
    RankCollapse { step: usize, min_diag: f64 },

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("fit error: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, QfiError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(QfiError::InvalidParameter(msg.into()))
}
