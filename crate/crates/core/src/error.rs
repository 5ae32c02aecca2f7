use thiserror::Error;

/// Errors raised anywhere in the convergence-factor pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid transmission parameters: {0}")]
    InvalidParams(String),

    #[error("interface index {index} out of range for J = {subdomains}")]
    IndexOutOfRange { index: usize, subdomains: usize },

    #[error("denominator underflow at k = {k} (|D| = {magnitude:e})")]
    DenominatorUnderflow { k: f64, magnitude: f64 },

    #[error("eigenvalue iteration failed to converge for a {dim}x{dim} matrix")]
    NonConvergence { dim: usize },

    #[error("optimizer budget exhausted after {evaluations} evaluations (rho* = {rho_star})")]
    NotConverged { evaluations: usize, rho_star: f64 },

    #[error("found {found} local maxima, equioscillation needs {required}")]
    TooFewMaxima { found: usize, required: usize },

    #[error("fitted exponent {exponent} deviates from {expected} by more than {tolerance}")]
    FitRejected {
        exponent: f64,
        expected: f64,
        tolerance: f64,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("mesh mismatch: {quantity} = {value} is not an integer multiple of h = {h}; choose h so that {quantity}/h is a whole number")]
    MeshMismatch {
        quantity: &'static str,
        value: f64,
        h: f64,
    },

    #[error("divergence detected at iteration {iteration}: error {error:e}")]
    DivergenceDetected { iteration: usize, error: f64 },

    #[error("numerical solver failure: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
