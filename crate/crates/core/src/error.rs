use thiserror::Error;

/// Errors raised by the geometric kernels and the verification drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {n} out of supported range {min}..={max}")]
    DimensionOutOfRange { n: usize, min: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("curvature symmetry violated: {0}")]
    CurvatureSymmetry(String),

    #[error("joint spinor kernel has dimension {found}, expected {expected}; orientation convention is inconsistent")]
    KernelDimension { found: usize, expected: usize },

    #[error("orientation error: {0}")]
    Orientation(String),

    #[error("metric is not positive definite at grid point {index}")]
    NonPositiveMetric { index: usize },

    #[error("cutoff {cutoff} exceeds the limit {limit} for dimension {n}")]
    CutoffOutOfRange { cutoff: usize, limit: usize, n: usize },

    #[error("eigen solver did not converge after {iterations} iterations (residual {residual:e})")]
    EigenNonConvergence { iterations: usize, residual: f64 },

    #[error("horizon condition violated at r = {r}: 2m(r) = {two_m}")]
    Horizon { r: f64, two_m: f64 },

    #[error("fiber family is not admissible: {0}")]
    Inadmissible(String),

    #[error("positivity scan failed at r = {r}, fiber sample {q}: scalar curvature {value:e}")]
    PositivityScan { r: f64, q: usize, value: f64 },

    #[error("no admissible epsilon found above the floor {floor:e}")]
    NoAdmissibleEpsilon { floor: f64 },

    #[error("finite-difference step {step:e} too large for sample at r = {r}")]
    StepTooLarge { step: f64, r: f64 },

    #[error("mass profile does not converge")]
    NonConvergentProfile,

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
