use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid correlation triple: delta = {delta:e} is negative")]
    InvalidCorrelation { delta: f64 },

    #[error("invalid parameter `{field}` = {value}: {reason}")]
    InvalidParams {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("conditional covariance is singular (determinant {det:e})")]
    SingularConditioning { det: f64 },

    #[error("alpha = {alpha} outside [0, {lambda}]")]
    DomainError { alpha: f64, lambda: f64 },

    #[error("degenerate geometry: lambda = {lambda:e}")]
    DegenerateGeometry { lambda: f64 },

    #[error("polytope family is empty")]
    EmptyFamily,

    #[error("conditional mutual information {value:e} bits is negative beyond rounding")]
    NegativeInformation { value: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && !value.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidParams {
            field,
            value,
            reason: "must be > 0",
        })
    }
}

pub(crate) fn positive_finite(field: &'static str, value: f64) -> Result<()> {
    positive(field, value)?;
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams {
            field,
            value,
            reason: "must be finite",
        })
    }
}

pub(crate) fn nonnegative_finite(field: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams {
            field,
            value,
            reason: "must be finite and >= 0",
        })
    }
}
