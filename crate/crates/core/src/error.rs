use thiserror::Error;

/// Errors produced by the sampling, decomposition and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree sequence is not graphical")]
    NotGraphical,

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid split sequence: {0}")]
    InvalidSplit(String),

    #[error("forbidden set is not a partial 1-factor: {0}")]
    ForbiddenSetNotMatching(String),

    #[error("instance too large: {chords} chords exceeds cap {cap}")]
    TooLarge { chords: usize, cap: usize },

    #[error("realization graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("cartesian product mismatch: {0}")]
    ProductMismatch(String),

    #[error("block size {block} does not divide {n}")]
    Divisibility { n: usize, block: usize },

    #[error("inconsistent degree spectra matrix: {0}")]
    InconsistentMatrix(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
