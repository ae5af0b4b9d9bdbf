use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid word {word:?}: {reason}")]
    InvalidWord { word: String, reason: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid number {0:?}")]
    InvalidNumber(String),

    #[error("partial word has {wildcards} wildcards, more than the expansion limit {limit}")]
    WildcardLimit { wildcards: usize, limit: usize },

    #[error("overlapping input: {0}")]
    Overlapping(String),

    #[error("not a prefix chain: {0}")]
    NotAChain(String),

    #[error("reduction not applicable: {0}")]
    ReductionNotApplicable(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty sample")]
    EmptySample,

    #[error("stream exhausted after {0} symbols")]
    StreamExhausted(u64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidAlphabet(_) => "invalid_alphabet",
            Error::InvalidWord { .. } => "invalid_word",
            Error::InvalidModel(_) => "invalid_model",
            Error::InvalidNumber(_) => "invalid_number",
            Error::WildcardLimit { .. } => "wildcard_limit",
            Error::Overlapping(_) => "overlapping",
            Error::NotAChain(_) => "not_a_chain",
            Error::ReductionNotApplicable(_) => "reduction_not_applicable",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::EmptySample => "empty_sample",
            Error::StreamExhausted(_) => "stream_exhausted",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
