use thiserror::Error;

/// Errors surfaced by the library. `Parameter` marks caller mistakes
/// (invalid primes, out-of-range indices), `Resource` marks refusals to
/// exceed configured exact-computation limits, and `Cache` marks a
/// Bernoulli cache whose entries fail validation.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("invalid cache entry {entry}: {reason}")]
    Cache { entry: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}
