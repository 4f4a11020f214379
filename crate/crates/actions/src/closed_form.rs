use crate::ActionsError;
use magspec_numerics::{adaptive_quad, bessel_j0, Tolerance};
use std::f64::consts::PI;

/// Legendre's χ₂(k) = Σ k^{2n+1}/(2n+1)² for 0 ≤ k < 1.
pub fn legendre_chi2(k: f64) -> Result<f64, ActionsError> {
    if !(0.0..1.0).contains(&k) {
        return Err(ActionsError::Domain(format!("chi2 series needs 0 <= k < 1, got {k}")));
    }
    let k2 = k * k;
    let mut term = k;
    let mut sum: f64 = 0.0;
    let mut n = 0u32;
    while term > 1e-18 * sum.max(1e-300) || n == 0 {
        let m = (2 * n + 1) as f64;
        sum += term / (m * m);
        term *= k2;
        n += 1;
        if n > 1_000_000 {
            break;
        }
    }
    Ok(sum)
}

/// Separatrix action I₂^{1+} of a·cos y₁ + b·cos βy₂ as a function of the
/// amplitude ratio Γ = min(|a|,|b|)/max(|a|,|b|):
/// (8/(πβ))·∫₀^{π/2} arcsin(√Γ sin t) dt.
pub fn closed_form_from_ratio(gamma: f64, beta: f64) -> Result<f64, ActionsError> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(ActionsError::Domain(format!(
            "amplitude ratio must lie in [0, 1], got {gamma}"
        )));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(ActionsError::Domain(format!("beta must be positive, got {beta}")));
    }
    let k = gamma.sqrt();
    let integral = adaptive_quad(
        |t| (k * t.sin()).clamp(-1.0, 1.0).asin(),
        0.0,
        0.5 * PI,
        Tolerance::uniform(1e-14),
    )?;
    Ok(8.0 / (PI * beta) * integral)
}

/// Closed-form I₂^{1+}(I₁) for the cosine example with amplitudes A, B.
pub fn closed_form_i2_example(a: f64, b: f64, beta: f64, i1: f64) -> Result<f64, ActionsError> {
    if !(i1 >= 0.0) {
        return Err(ActionsError::Domain(format!("I1 must be non-negative, got {i1}")));
    }
    let r = (2.0 * i1).sqrt();
    let aa = (a * bessel_j0(r)?).abs();
    let bb = (b * bessel_j0(beta * r)?).abs();
    let big = aa.max(bb);
    if big == 0.0 {
        return Err(ActionsError::DegenerateGraph(format!(
            "both averaged amplitudes vanish at I1 = {i1}"
        )));
    }
    closed_form_from_ratio(aa.min(bb) / big, beta)
}
