//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by simulation, generation, and I/O operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid caller-supplied value or malformed input data.
    #[error("invalid input: {0}")]
    Input(String),

    /// Encounter generation could not satisfy its geometric constraints.
    #[error("encounter generation failed: {0}")]
    Generation(String),

    /// Encounter-set file schema version does not match this build.
    #[error("unsupported encounter-set schema version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    /// A record in an encounter-set or outcome file failed to parse.
    #[error("malformed record {index} in {path}: {reason}")]
    MalformedRecord {
        index: usize,
        path: PathBuf,
        reason: String,
    },

    /// No weighted NMACs in the nominal pass; the risk ratio is undefined.
    /// Use a larger or denser encounter set.
    #[error(
        "zero weighted nominal NMACs: risk ratio undefined; \
         increase the encounter count or tighten the miss-distance bins"
    )]
    ZeroDenominator,

    /// Unexpected numeric or runtime failure.
    #[error("runtime error: {0}")]
    Runtime(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code convention: 1 input error, 2 runtime error,
    /// 3 statistical-validity failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_)
            | Error::VersionMismatch { .. }
            | Error::MalformedRecord { .. }
            | Error::Io { .. } => 1,
            Error::Generation(_) | Error::Runtime(_) => 2,
            Error::ZeroDenominator => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
