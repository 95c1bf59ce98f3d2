use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{name} must be {requirement}, got {value}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("fit did not converge after {iterations} iterations (sse = {sse:e})")]
    NoConvergence { iterations: usize, sse: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid configuration value for `{key}`: {reason}")]
    Config { key: &'static str, reason: String },

    #[error("oracle refused instance: {0}")]
    OracleRefused(String),

    #[error("oracle diverged at step {step}: objective fell from {before} to {after}")]
    OracleDiverged { step: usize, before: f64, after: f64 },

    #[error("certificate violated: {0}")]
    Certificate(String),

    #[error("csv input: {0}")]
    Csv(String),

    #[error("empty input: {0}")]
    Empty(&'static str),
}

impl Error {
    pub(crate) fn domain(name: &'static str, requirement: &'static str, value: f64) -> Self {
        Error::Domain {
            name,
            requirement,
            value,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
