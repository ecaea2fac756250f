use thiserror::Error;

/// Errors from polytope construction and queries.
#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("invalid vertex {index}: {reason}")]
    InvalidVertex { index: usize, reason: String },
    #[error("dimension {0} out of supported range 1..=6")]
    InvalidDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate subset {0:?} is invalid for this polytope")]
    InvalidSubset(Vec<usize>),
}

/// Errors from logarithmic support evaluation.
#[derive(Debug, Error)]
pub enum LogSupportError {
    #[error("point has a zero coordinate at index {0}; interior evaluation undefined")]
    ZeroCoordinate(usize),
    #[error("polytope is not a lower set; the clipped formula does not apply")]
    NotLowerSet,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Errors from function construction and evaluation.
#[derive(Debug, Error)]
pub enum FunctionError {
    #[error("piece {index} exponent lies outside the declared polytope (residual {residual:.3e})")]
    ExponentOutsidePolytope { index: usize, residual: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid function data: {0}")]
    Invalid(String),
}

/// Errors from the regularization operators.
#[derive(Debug, Error)]
pub enum RegularizeError {
    #[error("delta {delta} outside the legal range (0, {limit})")]
    DeltaTooLarge { delta: f64, limit: f64 },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("function declares no growth polytope; required by this operator")]
    MissingGrowth,
    #[error("smoothed branch does not stay below the cut branch on the outer boundary (margin {margin:.3e})")]
    GlueMismatch { margin: f64 },
    #[error(
        "sequence is not pointwise decreasing: index {index}, grid point {point}, rise {rise:.3e}"
    )]
    NotDecreasing {
        index: usize,
        point: usize,
        rise: f64,
    },
    #[error("last sequence element is not below the comparison function on the whole grid")]
    NeverBelow,
}

/// Errors from the diagnostic harnesses.
#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("polytope is a lower set; no witness direction exists")]
    IsLowerSet,
    #[error("polytope sequence is not nested decreasing: element {index} has a vertex outside its predecessor (residual {residual:.3e})")]
    NotNested { index: usize, residual: f64 },
    #[error("finite-difference stencil hit a singular value at offset {0}")]
    StencilHitsSingularity(usize),
    #[error("bad parameters: {0}")]
    BadParameters(String),
}

/// Umbrella error for callers that mix several modules.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    LogSupport(#[from] LogSupportError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Regularize(#[from] RegularizeError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
