use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration{}: {message}", if field.is_empty() { String::new() } else { format!(" at `{field}`") })]
    Config { field: String, message: String },

    #[error("infeasible design: {0}")]
    Infeasible(optocool::Error),

    #[error("numerical failure: {0}")]
    Numerical(optocool::Error),

    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Infeasible(_) => 2,
            CliError::Config { .. } => 3,
            CliError::Numerical(_) => 4,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<optocool::Error> for CliError {
    fn from(e: optocool::Error) -> Self {
        use optocool::Error::*;
        match e {
            InvalidParameter { field, reason } => CliError::Config { field, message: reason },
            UnknownStrategy { .. } => CliError::Config {
                field: String::new(),
                message: e.to_string(),
            },
            InfeasibleControl { .. } | NoFeasiblePoint { .. } | ControlOutOfRange { .. } => CliError::Infeasible(e),
            SymplecticDrift { .. } | SingularScaling { .. } | PoleProximity { .. } => CliError::Numerical(e),
        }
    }
}
