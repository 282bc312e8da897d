use thiserror::Error;

pub type Result<T, E = LbError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LbError {
    #[error("unsupported dimension {0}: only D=1 and D=2 lattices are available")]
    UnsupportedDimension(usize),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("velocity component {component} = {value} outside the modeled range [-1, 1]")]
    VelocityOutOfRange { component: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("loss of hyperbolicity at u = {u}: discriminant {discriminant} < 0")]
    LossOfHyperbolicity { u: f64, discriminant: f64 },

    #[error("degenerate eigen-modes: c+ = c- = {0}")]
    DegenerateModes(f64),

    #[error("renormalization undefined for viscosity factor A = {0} <= 0")]
    NonPositiveViscosityFactor(f64),

    #[error("root finder did not converge after {iterations} iterations (relative residuals {residuals:?})")]
    RootFinderNonConvergence {
        iterations: usize,
        residuals: Vec<f64>,
    },

    #[error("acoustic branch matching failed at k = {k}")]
    BranchMatching { k: f64 },

    #[error("growth rate undefined: {0}")]
    GrowthRate(String),

    #[error("internal error: {0}")]
    Internal(String),
}
