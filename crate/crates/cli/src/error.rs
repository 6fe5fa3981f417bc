use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unphysical state: {0}")]
    Unphysical(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: {0}")]
    VerifyFailed(String),
}

impl CliError {
    /// 0 ok, 1 verify failure, 2 usage or malformed input, 3 unphysical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Unphysical(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<cvgauss::Error> for CliError {
    fn from(e: cvgauss::Error) -> Self {
        use cvgauss::Error as E;
        match e {
            E::InvalidArgument(_) | E::NonUnitary { .. } => CliError::Usage(e.to_string()),
            E::Asymmetric { .. } | E::NotPositiveDefinite { .. } | E::Unphysical { .. } | E::GainOverflow { .. } => {
                CliError::Unphysical(e.to_string())
            }
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
