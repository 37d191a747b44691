//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },

    #[error("unsupported header in {path}: expected {expected}, found {found}")]
    BadHeader {
        path: String,
        expected: String,
        found: String,
    },

    /// Duplicate (ticker, date) rows are a data integrity failure, not a
    /// recoverable row diagnostic.
    #[error("duplicate observation for {ticker} on {date}")]
    DuplicateObservation { ticker: String, date: String },

    #[error("no usable price series in {path}")]
    EmptyInput { path: String },

    #[error("price series too short for lag {delta}: length {len}")]
    SeriesTooShort { len: usize, delta: usize },

    #[error(
        "insufficient samples: length {len} admits no (k={k}, delta={delta}) symbol triples"
    )]
    InsufficientSamples { len: usize, k: usize, delta: usize },

    #[error("insufficient history at index {t} for k={k}, delta={delta}")]
    InsufficientHistory { t: usize, k: usize, delta: usize },

    #[error("pattern {0:?} is not a permutation of 1..=k")]
    InvalidPattern(Vec<u8>),

    #[error("ordinal code {code} out of range for k={k}")]
    CodeOutOfRange { code: u32, k: usize },

    #[error("series of length {0} cannot be phase randomized (need at least 2 points)")]
    SurrogateTooShort(usize),

    #[error("empty benchmark pool: no valid surrogate transfer entropies")]
    EmptyBenchmark,

    #[error("empty sample set for survival ratio")]
    EmptySample,

    #[error("survival ratio target {0} exceeds every element of the real value set")]
    ValueAboveRealSet(f64),

    #[error("matrix shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("malformed artifact {path}: {detail}")]
    BadArtifact { path: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
