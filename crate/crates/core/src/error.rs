//! Error type shared by all series and congruence operations.

use thiserror::Error;

/// Errors raised by series arithmetic and the congruence checkers.
///
/// `Inconclusive` is special: it marks a claim that the configured
/// precision window cannot decide. Checkers never report such a claim
/// as `false`.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("laurent underflow: lambda exponent {exp} below window floor {floor}")]
    LaurentUnderflow { exp: i64, floor: i64 },

    #[error("leading coefficient is not a unit: {0}")]
    NonUnit(String),

    #[error("division leaves the precision window: {0}")]
    DivisionWindow(String),

    #[error("log-degree overflow: degree {degree} exceeds cap {cap}")]
    LogDegreeOverflow { degree: usize, cap: usize },

    #[error("inconclusive at this precision: {0}")]
    Inconclusive(String),

    #[error("zero factor in q-product: {0}")]
    ZeroFactor(String),

    #[error("no dyadic theta' with p*theta' - theta in [0, p-1] for theta = {theta}, p = {p}")]
    NoThetaPrime { theta: String, p: u32 },

    #[error("coefficient not p-integral: {0}")]
    NotIntegral(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
