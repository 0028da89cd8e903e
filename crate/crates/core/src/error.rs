use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("infeasible action: {0}")]
    Infeasible(String),

    #[error("invalid instance ({constraint}): {detail}")]
    InvalidInstance {
        constraint: &'static str,
        detail: String,
    },

    #[error("instance too large: refusing to enumerate {count} candidates (limit {limit})")]
    TooLarge { count: u128, limit: u128 },

    #[error("arm {arm} out of range for {n} arms")]
    ArmOutOfRange { arm: usize, n: usize },

    #[error("outcome {value} for arm {arm} lies outside [0, 1]")]
    OutcomeOutOfRange { arm: usize, value: f64 },

    #[error("negative cost {value} on vertex {vertex}")]
    NegativeCost { vertex: usize, value: f64 },

    #[error("arm {arm} has never been observed and no fallback range is set")]
    MissingFallback { arm: usize },

    #[error("Monte-Carlo estimate requested with zero samples")]
    ZeroSamples,

    #[error("k = {k} exceeds ground set of size {size}")]
    BudgetTooLarge { k: usize, size: usize },

    #[error("SDP solver did not converge after {iters} iterations (last objective {objective})")]
    NotConverged { iters: usize, objective: f64 },

    #[error("{count} odd-degree vertices exceed the exact matching limit of {limit}")]
    TooManyOddVertices { count: usize, limit: usize },

    #[error("need at least {need} seeds, got {got}")]
    InsufficientSeeds { need: usize, got: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(constraint: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidInstance {
            constraint,
            detail: detail.into(),
        }
    }
}
