use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error)]
pub enum MsxError {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("density is negative ({value:e}) at theta = {theta}")]
    NegativeDensity { theta: f64, value: f64 },

    #[error("quadrature did not converge after {points} points (residual {residual:e})")]
    Quadrature { points: usize, residual: f64 },

    #[error("section of order {order} is numerically not positive definite (pivot {pivot:e})")]
    NotPositiveDefinite { order: usize, pivot: f64 },

    #[error("diagonal moment c[{index}][{index}] = {value} is not real and positive")]
    NonRealDiagonal { index: usize, value: String },

    #[error("order mismatch: expected {expected}, got {got}")]
    OrderMismatch { expected: usize, got: usize },

    #[error("degree {degree} is out of range for a transition section of order {order}")]
    DegreeOutOfRange { degree: usize, order: usize },

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("eigenvalue iteration did not converge (residual {residual:e})")]
    EigenNonConvergence { residual: f64 },

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, MsxError>;
