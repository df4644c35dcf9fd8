use ccrlab::Error;
use thiserror::Error as ThisError;

/// Failures of a subcommand, each with a fixed exit code.
#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    /// Unparseable arguments, JSON or file contents.
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    InvariantSet(String),
}

impl CliError {
    /// 0 success, 1 I/O or parse, 2 constraint, 3 commuting pair,
    /// 4 invariant-set violation.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Format(_) | CliError::Core(Error::InvalidInput(_)) => 1,
            CliError::Core(Error::CommutingPair { .. }) => 3,
            CliError::Core(Error::BasePointNotInvariant { .. }) | CliError::InvariantSet(_) => 4,
            CliError::Core(_) => 2,
        }
    }
}
