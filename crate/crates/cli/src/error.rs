use thiserror::Error;

use volstat::dist::DistError;
use volstat::implied::ImpliedError;
use volstat::market_data::MarketDataError;
use volstat::realized::RealizedError;
use volstat::sv::SvError;

/// Input problems exit with 2, failures inside a computation with 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("computation error: {0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) => 3,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Attaches the offending file to a market-data error.
pub fn in_file(path: &str) -> impl Fn(MarketDataError) -> CliError + '_ {
    move |e| CliError::Input(format!("{path}: {e}"))
}

impl From<ImpliedError> for CliError {
    fn from(e: ImpliedError) -> Self {
        match e {
            ImpliedError::Format { .. }
            | ImpliedError::InvalidChain(_)
            | ImpliedError::InvalidQuote { .. }
            | ImpliedError::DuplicateStrike { .. }
            | ImpliedError::EmptyChain => CliError::Input(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl From<RealizedError> for CliError {
    fn from(e: RealizedError) -> Self {
        CliError::Compute(e.to_string())
    }
}

impl From<DistError> for CliError {
    fn from(e: DistError) -> Self {
        CliError::Compute(e.to_string())
    }
}

impl From<SvError> for CliError {
    fn from(e: SvError) -> Self {
        match e {
            SvError::InvalidParams { .. } | SvError::InvalidStep(_) | SvError::InvalidHorizons => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Compute(e.to_string()),
        }
    }
}
