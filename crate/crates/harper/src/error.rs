use magspec_lattice::LatticeError;
use magspec_numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarperError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shift ratio beta*h/(2*pi) = {ratio} is not the inverse of the flux {flux}")]
    Incommensurate { ratio: f64, flux: String },
}
