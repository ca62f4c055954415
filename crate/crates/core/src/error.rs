use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported root system {series}{rank}: {reason}")]
    UnsupportedSystem {
        series: String,
        rank: usize,
        reason: &'static str,
    },

    #[error("weight {weight} has {got} coordinates, expected {expected}")]
    RankMismatch {
        weight: String,
        got: usize,
        expected: usize,
    },

    #[error("simple root index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("weight {0} is not integral")]
    NonIntegral(String),

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    #[error("{what} of predicted size {predicted} exceeds the limit {limit}")]
    GuardExceeded {
        what: &'static str,
        predicted: String,
        limit: u64,
    },

    #[error("negative multiplicity {mult} at {weight} in {context}")]
    NegativeMultiplicity {
        context: String,
        weight: String,
        mult: String,
    },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("missing parameter `{0}`")]
    MissingParameter(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
