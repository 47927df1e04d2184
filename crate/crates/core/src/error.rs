use thiserror::Error;

/// Failure modes shared by every numeric routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside the type-level domain (non-finite, negative amplitude, ...).
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The point lies outside the open boundedness disc `eps^2 + j0^2 < omega0^4`.
    #[error("unbounded: eps^2 + j0^2 = {radius_sq} is not below omega0^4 = {limit}")]
    Unbounded { radius_sq: f64, limit: f64 },

    /// The lowest initial normal frequency vanishes (or rounds to zero).
    #[error("forbidden point: initial normal frequency squared is {value}, must be positive")]
    ForbiddenPoint { value: f64 },

    /// An argument is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Grid refinement in the quadrature oracle failed to stabilize.
    #[error("quadrature did not converge: {grid} points per axis, last change {change:e}")]
    NonConverged { grid: usize, change: f64 },
}

impl Error {
    /// True for the errors produced by the admissibility gate.
    pub fn is_forbidden(&self) -> bool {
        matches!(self, Error::Unbounded { .. } | Error::ForbiddenPoint { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
