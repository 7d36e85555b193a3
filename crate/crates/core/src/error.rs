use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the collocation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid breakpoints: {0}")]
    InvalidBreakpoints(String),

    #[error("invalid knot vector: {0}")]
    InvalidKnots(String),

    #[error("continuity count {value} at interior breakpoint {index} exceeds the order {order}")]
    ContinuityTooHigh { index: usize, value: usize, order: usize },

    #[error("derivative order {deriv} is not below the spline order {order}")]
    DerivativeTooHigh { deriv: usize, order: usize },

    #[error("expected {expected} values, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entry ({row}, {col}) lies outside the declared band")]
    OutOfBand { row: usize, col: usize },

    #[error("entry ({row}, {col}) written more than once")]
    OverlappingWrite { row: usize, col: usize },

    #[error("singular system: zero pivot in row {row}")]
    Singular { row: usize },

    #[error("unsupported number of points per subinterval: {0} (supported: 1..=24)")]
    UnsupportedPointCount(usize),

    #[error("template point {0} does not lie strictly inside (-1, 1) in increasing order")]
    InvalidTemplate(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid side condition: {0}")]
    InvalidSideCondition(String),

    #[error("coefficient functions are singular at x = {0}")]
    SingularCoefficient(f64),

    #[error("unsupported problem: {0}")]
    UnsupportedProblem(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
