use diverse_medians::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("{0}")]
    Validation(String),
    #[error("strategy {strategy} does not apply to objective {objective}")]
    Mismatch { objective: String, strategy: String },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 0 success, 2 validation, 3 cap exceeded, 4 infeasible or nonconvergent.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::CapExceeded { .. }) => 3,
            CliError::Core(Error::Infeasible(_) | Error::NonConvergent(_)) => 4,
            _ => 2,
        }
    }

    /// A hint printed after the message, if any.
    pub fn remediation(&self) -> Option<&'static str> {
        match self {
            CliError::Core(Error::CapExceeded { .. }) => Some(
                "raise --max-candidates / --max-tuples / --max-states, or pick a strategy that avoids enumeration (--strategy sample)",
            ),
            CliError::Core(Error::Infeasible(_)) => Some("try --strategy sample or a larger --epsilon"),
            _ => None,
        }
    }
}
