//! Shared error type for the solver crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid spatial dimension {0}: must be 1, 2, or 3")]
    InvalidDimension(u32),
    #[error("invalid radii r0={r0}, r1={r1}: {reason}")]
    InvalidRadii { r0: f64, r1: f64, reason: String },
    #[error("grid too coarse: M={0} < 4")]
    TooCoarse(usize),
    #[error("zero pivot at row {0} during elimination")]
    ZeroPivot(usize),
    #[error("{context}: no convergence after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence {
        context: String,
        iterations: usize,
        residual: f64,
    },
    #[error("solution blow-up at t={t}: norm {norm:.3e} exceeds guard {guard:.1e}")]
    Blowup { t: f64, norm: f64, guard: f64 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, SimError>;
