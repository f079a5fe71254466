use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    #[error("non-finite value {value} at x = {at}")]
    NonFinite { at: f64, value: f64 },

    #[error("negative Riesz mass {mass} on ({a}, {b}]: profile is not subharmonic")]
    NegativeMass { a: f64, b: f64, mass: f64 },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
