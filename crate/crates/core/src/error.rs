use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by graph loading, search and index operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("line {line}: malformed token {token:?}")]
    Parse { line: usize, token: String },

    #[error("vertex {0} is not in the graph")]
    UnknownVertex(u64),

    #[error("common neighbours need two distinct vertices (got {0} twice)")]
    SameVertex(u64),

    #[error("truss threshold k must be at least 2 (got {0})")]
    InvalidK(u32),

    #[error("r must be in 1..={n} (got {r})")]
    InvalidR { r: usize, n: usize },

    #[error("ego materialization too large: {needed} ego edges exceed the cap of {cap}")]
    EgoCapExceeded { needed: usize, cap: usize },

    #[error("oracle refuses graphs with more than {cap} vertices (got {n})")]
    OracleCapExceeded { n: usize, cap: usize },

    #[error("truss map does not cover ego edge ({0}, {1})")]
    MissingEdge(u32, u32),

    #[error("index format error: {0}")]
    IndexFormat(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Write(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
