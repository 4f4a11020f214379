use magspec_numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Sturm1dError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported potential: {0}")]
    Unsupported(String),
    #[error("ill-conditioned overlap integral {overlap:e} (threshold {threshold:e})")]
    Conditioning { overlap: f64, threshold: f64 },
}
