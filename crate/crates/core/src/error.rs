use std::path::PathBuf;

use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EdgeError {
    #[error("edge endpoints {0} and {1} lie on the same side")]
    SameSide(VertexId, VertexId),
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("sample size must be at least {min}, got {got}")]
    SampleTooSmall { min: usize, got: usize },
    #[error("priority and position seeds must differ (both {0:#x})")]
    SeedClash(u64),
    #[error("duplication ratio must be non-negative, got {0}")]
    NegativeDupRatio(f64),
    #[error("at least one snapshot is required")]
    NoSnapshots,
    #[error("at least one seed is required")]
    NoSeeds,
    #[error("invalid sample size {0:?}: expected an integer or 2^k")]
    BadSampleSize(String),
    #[error("unknown algorithm {0:?} (expected deabc-pq, deabc-bucket, fable or exact)")]
    UnknownAlgorithm(String),
    #[error("invalid generator descriptor {0:?}")]
    BadGenerator(String),
}

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("graph has {count} butterflies, above the enumeration limit of {limit}")]
    TooManyButterflies { count: u64, limit: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("ground truth file {path}: {reason}")]
    GroundTruth { path: PathBuf, reason: String },
    #[error("writing results: {0}")]
    Csv(#[from] csv::Error),
    #[error("trial with seed {seed} failed: {reason}")]
    Trial { seed: u64, reason: String },
}
