use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] asai_core::Error),
    #[error("cannot write report: {0}")]
    Output(String),
}

pub type Result<T> = std::result::Result<T, CliError>;
