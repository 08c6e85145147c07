//! Error taxonomy mapped to process exit codes: 1 for configuration
//! problems, 2 for data problems, 3 for numerical failures.

use sparsecov::chain::SamplerError;
use sparsecov::datagen::DatagenError;
use sparsecov::diagnostics::DiagnosticsError;
use sparsecov::lda::LdaError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Data(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<SamplerError> for CliError {
    fn from(e: SamplerError) -> Self {
        match e {
            SamplerError::InvalidConfig(msg) => CliError::Config(msg),
            SamplerError::InvalidData(msg) => CliError::Data(msg),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<DatagenError> for CliError {
    fn from(e: DatagenError) -> Self {
        match e {
            DatagenError::InvalidConfig(msg) => CliError::Config(msg),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<LdaError> for CliError {
    fn from(e: LdaError) -> Self {
        match e {
            LdaError::Sampler(s) => s.into(),
            LdaError::Matrix(m) => CliError::Numerical(m.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<DiagnosticsError> for CliError {
    fn from(e: DiagnosticsError) -> Self {
        CliError::Numerical(e.to_string())
    }
}
