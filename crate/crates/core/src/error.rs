use thiserror::Error;

/// Errors raised by the forestlab library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("size limit exceeded: n = {n} is above the cap of {cap}")]
    SizeLimitExceeded { n: usize, cap: usize },

    #[error("graph is not a tree")]
    NotATree,

    #[error("graph contains a cycle")]
    NotAForest,

    #[error("vertex set must be a nonempty proper subset of the vertex set")]
    EmptyOrFullSet,

    #[error("weight {k} equals W/2; the pendant-sum formula excludes the tie weight")]
    TieWeightUnsupported { k: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("class is not bridge-alterable: {0}")]
    NotBridgeAlterable(String),

    #[error("class is not bridge-addable: {0}")]
    NotBridgeAddable(String),

    #[error("class is empty")]
    EmptyClass,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
