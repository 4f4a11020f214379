use magspec_lattice::LatticeError;
use magspec_numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported topology: {message}; extra critical points at {extra:?}")]
    UnsupportedTopology { message: String, extra: Vec<[f64; 2]> },
    #[error("level g = {g} lies within {tolerance:e} of the critical value {critical}")]
    SeparatrixProximity { g: f64, critical: f64, tolerance: f64 },
    #[error("critical point search incomplete: {0}")]
    IncompleteSearch(String),
    #[error("level set tracing failed: {0}")]
    Tracing(String),
}
