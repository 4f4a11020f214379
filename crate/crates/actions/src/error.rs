use magspec_classical::ClassicalError;
use magspec_lattice::LatticeError;
use magspec_numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ActionsError {
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("level g = {g} is within {distance:e} of the critical value {critical}")]
    SeparatrixProximity { g: f64, critical: f64, distance: f64 },
    #[error("degenerate Reeb graph: {0}")]
    DegenerateGraph(String),
    #[error("trajectory error: {0}")]
    Trajectory(String),
}
