use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite evaluation at parameters {params:?}")]
    NonFinite { params: Vec<f64> },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("degenerate zig-zag leg {index}: dx - 2d = {gap:e}")]
    DegenerateLeg { index: usize, gap: f64 },

    #[error("slope pole: 1 + k tan(theta) = {value:e} for k = {slope}")]
    SlopePole { slope: f64, value: f64 },

    #[error("vertical front tangency away from a cusp at t = {t}")]
    VerticalTangency { t: f64 },

    #[error("family slice s = {s} is not Legendrian (defect {defect:e})")]
    SliceDefect { s: f64, defect: f64 },

    #[error("offset frame degenerate at (t, s, w) = {at:?} (condition number {condition:e})")]
    FrameDegenerate { at: [f64; 3], condition: f64 },

    #[error("point {0:?} outside the chart domain")]
    OutsideDomain(Vec<f64>),

    #[error("interval family violates constraint: {0}")]
    IntervalConstraint(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
