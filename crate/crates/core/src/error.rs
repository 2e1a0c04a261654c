use thiserror::Error;

/// Failures raised by the geometry, model and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A radius (or sample point) outside the region where the data is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A profile produced a non-finite value, or a numerical scheme did not converge.
    #[error("numerics error: {0}")]
    Numerics(String),
    /// Invalid model parameters.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// The requested quantity is undefined at this point (typically V = 0).
    #[error("degeneracy: {0}")]
    Degeneracy(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
