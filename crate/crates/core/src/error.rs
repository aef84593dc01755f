use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Payloads are stored as `f64` so the error type does not depend on the
/// scalar the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate parameters: {what} (got {a} and {b}, they must differ)")]
    DegenerateParams { what: &'static str, a: f64, b: f64 },

    #[error("parameter pair (alpha={alpha}, beta={beta}) lies outside the admissible region")]
    Region { alpha: f64, beta: f64 },

    #[error("normalizer `{name}` vanishes at (alpha={alpha}, beta={beta})")]
    ZeroNormalizer { name: String, alpha: f64, beta: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("map is not strictly monotone: derivative {derivative} at x={x}")]
    Monotonicity { x: f64, derivative: f64 },

    #[error("target value {y} outside attainable range [{lo}, {hi}]")]
    Range { y: f64, lo: f64, hi: f64 },

    #[error("direction with slope m=1 is parallel to the diagonal alpha=beta")]
    DegenerateDirection,

    #[error("no convergence after {iterations} iterations (residual {residual})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        trace: Vec<String>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
