use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no Clifford module construction available for m = {m}: {reason}")]
    UnsupportedDimension { m: usize, reason: String },

    #[error("generator matrices violate the Clifford relations: {0}")]
    InvalidGenerators(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("not applicable: {0}")]
    NotApplicable(&'static str),

    #[error("point is not in the half-space model (t = {t})")]
    NotInModel { t: f64 },

    #[error("parameter θ = {theta} is at a pole of the prolonged geodesic")]
    PoleAtTheta { theta: f64 },

    #[error("cross-ratio of a degenerate range (repeated points)")]
    DegenerateRange,

    #[error("parameter lies outside the open ball of the focal variety (distance {distance}, radius {radius})")]
    OutsideBall { distance: f64, radius: f64 },

    #[error("free parameters violate the orthogonality constraint (residual {residual:e})")]
    InvalidFreeParameters { residual: f64 },

    #[error("the function attains no minimum: {0}")]
    NoMinimum(&'static str),

    #[error("point is not on the focal variety (residual {residual:e})")]
    NotOnFocalVariety { residual: f64 },

    #[error("multi-start minimization disagrees by {spread:e}")]
    ConvergenceFailure { spread: f64 },

    #[error("vector is not in the required subspace (distance {distance:e})")]
    SubspaceViolation { distance: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
