use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point lies on the singular axis |z| = {norm:e} (exclusion radius {eps:e})")]
    SingularAxis { norm: f64, eps: f64 },

    #[error("stencil out of bounds at grid index {index:?} along axis {axis}")]
    StencilOutOfBounds { index: Vec<usize>, axis: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: refinements gave {coarse:e} and {fine:e}")]
    Accuracy { coarse: f64, fine: f64 },

    #[error("internal consistency check failed for {what}: values {values:?} (tolerance {tol:e})")]
    InternalConsistency {
        what: String,
        values: Vec<f64>,
        tol: f64,
    },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("capability missing: {0}")]
    Capability(String),

    #[error("iterative solver stopped after {iterations} iterations at relative residual {residual:e}")]
    Solver { iterations: usize, residual: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
