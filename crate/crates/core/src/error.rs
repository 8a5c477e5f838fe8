//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by the simulation modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine failed to converge or lost accuracy.
    /// `last_time` is the last time the integrator considered good.
    #[error("numeric error at t = {last_time}: {message}")]
    Numeric { message: String, last_time: f64 },

    /// A state failed an internal consistency check (e.g. a conserved
    /// quantity drifted beyond tolerance).
    #[error("consistency error: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, last_time: f64) -> Self {
        Error::Numeric {
            message: msg.into(),
            last_time,
        }
    }
}
