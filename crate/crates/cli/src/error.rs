use std::fmt::Display;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("gate refusal: {0}")]
    GateRefusal(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::GateRefusal(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    pub fn input(e: impl Display) -> Self {
        CliError::Input(e.to_string())
    }

    pub fn numerical(e: impl Display) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
