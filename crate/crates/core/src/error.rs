use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parameter {u:?} is within {margin:e} of a chart boundary")]
    ChartBoundary { u: Vec<f64>, margin: f64 },

    #[error("jacobian is rank deficient (sigma_min / sigma_max = {ratio:e})")]
    RankDeficient { ratio: f64 },

    #[error("zero tangent vector")]
    ZeroTangent,

    #[error("intrinsic dimension {0} exceeds the direction-search limit of 6")]
    DimensionTooLarge(usize),

    #[error("not a degree-4 design (residual {residual:e})")]
    NotADesign { residual: f64 },

    #[error("linear system is infeasible")]
    Infeasible,

    #[error("no rational design found up to height {height}; relaxed residual {residual:e}")]
    HeightExhausted { height: u64, residual: f64 },

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("failed to converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn ensure_finite(values: &[f64], what: &'static str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}
