//! Command-line front end for the modal formula-size game.
//!
//! Every machine-readable result is JSON on stdout and diagnostics go to
//! stderr. Exit codes: `0` success, `1` refusal (search budget, level guard),
//! `2` bad input.

pub mod cli;
pub mod experiment;
pub mod format;
pub mod play;

use fsgame_core::game::GameError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or malformed input files, formulas or arguments.
    #[error("{0}")]
    Input(String),
    /// A well-formed request the tool declines to finish.
    #[error("{0}")]
    Refused(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Refused(_) => 1,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::BudgetExceeded { .. } | GameError::SplitTooWide { .. } => CliError::Refused(e.to_string()),
            GameError::Model(_) | GameError::Logic(_) | GameError::IllegalMove(_) => CliError::Input(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}
