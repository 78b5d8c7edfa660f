use thiserror::Error;

use crate::hysteron::Polarity;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{polarity} relay requires {constraint}, got set_threshold={set} and reset_threshold={reset}")]
    ThresholdOrder {
        polarity: Polarity,
        set: f64,
        reset: f64,
        constraint: &'static str,
    },

    #[error("non-finite input sample {value} at index {index}")]
    NonFiniteInput { index: usize, value: f64 },

    #[error("input error: {0}")]
    Input(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("network build error: {0}")]
    Build(String),

    #[error("lead is undefined for a zero rate of change")]
    UndefinedLead,

    #[error("no delay estimate: {0}")]
    NoEstimate(String),

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

/// Rejects NaN and infinities; `index` is reported back in the error.
pub(crate) fn check_finite(index: usize, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteInput { index, value })
    }
}
