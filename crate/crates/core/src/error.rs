use thiserror::Error;

/// Errors raised by the library. Invariant violations carry the name of the
/// violated invariant so front ends can report it verbatim.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid orbifold spec: invariant `{invariant}` violated ({detail})")]
    InvalidSpec {
        invariant: &'static str,
        detail: String,
    },

    #[error("invalid embedding: invariant `{invariant}` violated ({detail})")]
    InvalidEmbedding {
        invariant: &'static str,
        detail: String,
    },

    #[error("orbifold is excluded from the supported classes: {0}")]
    Excluded(String),

    #[error("precondition `{0}` violated: {1}")]
    Precondition(&'static str, String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("cannot parse word `{input}`: {reason}")]
    WordParse { input: String, reason: String },

    #[error("crossing index {index} out of range for {strings} strings")]
    CrossingOutOfRange { index: i64, strings: usize },

    #[error("enumeration of {size} words exceeds the cap of {cap}")]
    EnumerationCap { size: u128, cap: u128 },

    #[error("expected a single relator, found {0}")]
    RelatorCount(usize),

    #[error("unknown stored presentation `{0}`")]
    UnknownPresentation(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;
