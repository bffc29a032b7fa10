use thiserror::Error;

/// Errors raised by the capacity library.
///
/// Every variant carries enough context for a one-line diagnostic; the CLI
/// prints `Display` verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {0}: expected n >= {1}")]
    InvalidDimension(i64, u32),

    #[error("profile parse error: {0}")]
    Parse(String),

    #[error("convexity violation: {0}")]
    ConvexityViolation(String),

    #[error("t = {t} lies beyond the profile horizon t_max = {t_max}")]
    Horizon { t: f64, t_max: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: value {value}, error estimate {estimate}")]
    Accuracy { value: f64, estimate: f64 },

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("invalid condenser: {0}")]
    InvalidCondenser(String),

    #[error("divergent condenser: {0}")]
    DivergentCondenser(String),

    #[error("divergent tail: {0}")]
    DivergentTail(String),

    #[error("divergent integral: {0}")]
    Divergence(String),

    #[error("regime error: {0}")]
    Regime(String),

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("horizon too small: {0}")]
    HorizonTooSmall(String),

    #[error("optimizer did not converge: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
