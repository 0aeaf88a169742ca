use thiserror::Error;

use sawell::susy::SusyError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("chain rejected: {0}")]
    Gate(SusyError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) | CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Gate(_) => 3,
        }
    }

    pub fn numerical(e: impl std::fmt::Display) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<SusyError> for CliError {
    fn from(e: SusyError) -> Self {
        match e {
            SusyError::NegativeGroundState
            | SusyError::ZeroEnergyGroundState
            | SusyError::DegenerateGroundState
            | SusyError::NonUniformSpectrum { .. } => CliError::Gate(e),
            SusyError::InvalidOrder(_) => CliError::Input(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}
