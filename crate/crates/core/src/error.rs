use thiserror::Error;

/// Errors raised by every fallible operation in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty alphabet")]
    EmptyAlphabet,

    #[error("invalid probability at index {index}: {value}")]
    InvalidProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, outside tolerance of 1")]
    NotNormalized { sum: f64 },

    #[error("{which} marginal has zero mass at symbol {index}")]
    ZeroMarginal { which: &'static str, index: usize },

    #[error("reference distribution has zero mass at index {index}")]
    ZeroReference { index: usize },

    #[error(
        "degenerate ratio: candidate lies within {radius} (total variation) of the true marginal"
    )]
    DegenerateRatio { radius: f64 },

    #[error("product alphabet {x_size}x{y_size} too large (limit {limit}x{limit})")]
    AlphabetTooLarge {
        x_size: usize,
        y_size: usize,
        limit: usize,
    },

    #[error("invalid distortion matrix: {0}")]
    InvalidDistortion(String),

    #[error("infeasible distortion {target}: minimum achievable is {minimum}")]
    InfeasibleDistortion { target: f64, minimum: f64 },

    #[error("Blahut-Arimoto did not converge after {iterations} iterations (last gap {gap})")]
    NonConvergence { iterations: usize, gap: f64 },

    #[error("rate-distortion curve invariant violated: {0}")]
    CurveInvariant(String),

    #[error("undefined ratio: communication rate must be positive")]
    UndefinedRatio,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
