use magspec_numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("invalid potential document: {0}")]
    Spec(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
