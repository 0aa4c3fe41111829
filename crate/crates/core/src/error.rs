use thiserror::Error;

/// Errors raised by the physics layer and the Fock-space oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mixing angle {0} rad is outside [0, π/2]")]
    AngleOutOfRange(f64),
    #[error("sin²θ = {0} is outside [0, 1]")]
    Sin2ThetaOutOfRange(f64),
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("momentum magnitude must be non-negative, got {0}")]
    NegativeMomentum(f64),
    #[error("mode count {0} is outside 1..=12")]
    ModeCount(usize),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unknown charge kind `{0}`")]
    UnknownCharge(String),
    #[error("helicity label must be 1 or 2, got {0}")]
    Helicity(u8),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}
