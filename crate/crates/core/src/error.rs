use thiserror::Error;

/// Errors surfaced by the orbit and invariant pipelines.
///
/// `Numerical` carries the name of the pipeline stage that failed so callers
/// (and the CLI exit-code contract) can tell validation problems apart from
/// genuine numerical breakdowns.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid orbit spec: {0}")]
    InvalidSpec(String),

    #[error("eccentricity {e} rejected: {reason}")]
    GuardBand { e: f64, reason: String },

    #[error("{stage}: {message}")]
    Numerical { stage: &'static str, message: String },

    #[error("invariant constancy violated: {0}")]
    Constancy(String),
}

impl Error {
    pub fn numerical(stage: &'static str, message: impl Into<String>) -> Self {
        Error::Numerical {
            stage,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
