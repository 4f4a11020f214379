use thiserror::Error;

/// Failure modes of the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no sign change on [{a}, {b}]: f(a) = {fa}, f(b) = {fb}")]
    Bracket { a: f64, b: f64, fa: f64, fb: f64 },
    #[error("convergence failure after {iterations} iterations (best estimate {estimate}, error {error})")]
    Convergence {
        iterations: usize,
        estimate: f64,
        error: f64,
    },
    #[error("matrix is not Hermitian: |m[{i}][{j}] - conj(m[{j}][{i}])| = {deviation}")]
    NotHermitian { i: usize, j: usize, deviation: f64 },
    #[error("step size underflow at t = {t} (h = {h})")]
    StepUnderflow { t: f64, h: f64 },
}
