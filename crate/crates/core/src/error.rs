use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model or run parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A function argument is outside the function's domain (negative time, etc).
    #[error("domain error: {0}")]
    Domain(String),

    /// The inputs are valid but an operation's precondition does not hold,
    /// e.g. bounds requested for a decreasing hazard or a harmful repair.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("intensity ordering violated at t = {at}")]
    OrderingViolated { at: f64 },

    #[error("invalid history: {0}")]
    InvalidHistory(String),

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    /// A time-rescaling residual came out negative, which means the
    /// integrated intensity is not monotone.
    #[error("negative residual {value} at index {index}")]
    NegativeResidual { index: usize, value: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
