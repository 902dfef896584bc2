use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: not a permutation, not a Dyck path, wrong sizes.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A label or rank outside its admissible range. `index` is 1-based.
    #[error("constraint violated at index {index}: {message}")]
    Constraint { index: usize, message: String },

    #[error("exhaustive enumeration over {size} elements exceeds the limit of {limit}; use force to override")]
    GuardLimit { size: usize, limit: usize },

    #[error("illegal move: {0}")]
    IllegalMove(String),

    #[error("invalid game state: {0}")]
    State(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
