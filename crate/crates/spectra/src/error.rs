use magspec_actions::ActionsError;
use magspec_classical::ClassicalError;
use magspec_lattice::LatticeError;
use magspec_numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error(transparent)]
    Actions(#[from] ActionsError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resonant mode ({k1}, {k2}): |k·ω| = {denominator:e}")]
    Resonance { k1: i64, k2: i64, denominator: f64 },
    #[error("subband count {value} does not round to the flux numerator {expected} (Kirchhoff residual {residual:e})")]
    SubbandMismatch { value: f64, expected: i64, residual: f64 },
    #[error("Kirchhoff residual {residual:e} exceeds {tolerance:e}")]
    Kirchhoff { residual: f64, tolerance: f64 },
}
