use magspec_actions::ActionsError;
use magspec_numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BlochError {
    #[error(transparent)]
    Actions(#[from] ActionsError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("drift {d:?} is not (±1, 0); use the truncated general-d solver")]
    UnsupportedDrift { d: (i64, i64) },
}
