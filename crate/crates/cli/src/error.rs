use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Numeric(#[from] dce_core::Error),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot encode output: {0}")]
    Encode(String),
}

impl CliError {
    /// 2 for bad input, 1 for everything that fails at run time.
    pub fn exit_code(&self) -> ExitCode {
        use dce_core::Error as E;
        let invalid = match self {
            CliError::Invalid(_) => true,
            CliError::Numeric(e) => matches!(
                e,
                E::NonPositiveInput { .. }
                    | E::OutOfRange { .. }
                    | E::ZeroDetuning
                    | E::NonPositiveTemperature(_)
                    | E::NonPositiveOccupation(_)
                    | E::NegativeTime(_)
                    | E::InconsistentNoiseFactor { .. }
                    | E::InvalidGrid(_)
                    | E::InvalidEnsemble(_)
                    | E::LagBeyondDuration { .. }
            ),
            CliError::Io { .. } | CliError::Encode(_) => false,
        };
        ExitCode::from(if invalid { 2 } else { 1 })
    }
}
