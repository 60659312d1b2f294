//! Crate-wide error type.

/// Unified error for every fallible operation in the crate.
///
/// Variants carry a short human-readable detail string; the harness wraps
/// sub-module failures in [`Error::Stage`] so a scenario error names the
/// stage that produced it.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("invalid length: {0}")]
    InvalidLength(String),
    #[error("invalid count: {0}")]
    InvalidCount(String),
    #[error("wrong scheme: {0}")]
    WrongScheme(String),
    #[error("sequence too short: {0}")]
    TooShort(String),
    #[error("degenerate distribution: {0}")]
    DegenerateDist(String),
    #[error("empty message")]
    EmptyMessage,
    #[error("no keys: {0}")]
    NoKeys(String),
    #[error("insufficient nulls: {0}")]
    InsufficientNulls(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("empty test set")]
    EmptyTestSet,
    #[error("missing label: {0}")]
    MissingLabel(String),
    #[error("missing class: {0}")]
    MissingClass(String),
    #[error("non-finite loss: {0}")]
    NonFiniteLoss(String),
    #[error("bad k: {0}")]
    BadK(String),
    #[error("insufficient pool: {0}")]
    InsufficientPool(String),
    #[error("empty output")]
    EmptyOutput,
    #[error("pool too small: {0}")]
    PoolTooSmall(String),
    #[error("bad axis: {0}")]
    BadAxis(String),
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps an error with the name of the harness stage that hit it.
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
