use thiserror::Error;

/// Errors raised by the numerical routines, estimators and experiment drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node solver did not converge: {0}")]
    NoConvergence(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("point is not on the unit sphere (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("degenerate quotient denominator {value:e} (threshold {threshold:e})")]
    DegenerateDenominator { value: f64, threshold: f64 },

    #[error("estimator configured for the {configured} form but {requested} was requested")]
    WrongMode {
        configured: &'static str,
        requested: &'static str,
    },

    #[error("signal-to-noise ratio undefined for a zero noise vector")]
    ZeroNoise,

    #[error("cannot scale noise against an all-zero signal")]
    ZeroSignal,

    #[error("true parameter component {index} is zero")]
    ZeroTrueComponent { index: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
