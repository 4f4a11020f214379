//! Two-eigenfunction energy difference from a boundary Wronskian.

use std::ops::Range;

use crate::Sturm1dError;

/// Relative overlap below which the difference formula is rejected.
pub const OVERLAP_FLOOR: f64 = 1e-10;

/// E₁ − E₂ = h²[ψ₁ψ₂' − ψ₂ψ₁']ₐᵇ / ∫ₐᵇψ₁ψ₂ for grid eigenfunctions of the
/// central-difference operator, using the staggered Wronskian
/// W_j = (ψ₁,jψ₂,j+1 − ψ₂,jψ₁,j+1)/Δx. The window covers samples a..b and
/// needs one neighbour on each side; for exact grid eigenpairs the result
/// equals E₁ − E₂ up to rounding.
pub fn lifshits_difference(
    psi1: &[f64],
    psi2: &[f64],
    window: Range<usize>,
    dx: f64,
    h: f64,
) -> Result<f64, Sturm1dError> {
    let (a, b) = (window.start, window.end);
    if psi1.len() != psi2.len() || a == 0 || b <= a || b >= psi1.len() || !(dx > 0.0) {
        return Err(Sturm1dError::Domain(format!(
            "window {a}..{b} needs neighbours inside arrays of length {} and {}",
            psi1.len(),
            psi2.len()
        )));
    }
    let w = |j: usize| (psi1[j] * psi2[j + 1] - psi2[j] * psi1[j + 1]) / dx;
    let overlap: f64 = (a..b).map(|j| psi1[j] * psi2[j]).sum::<f64>() * dx;
    let n1: f64 = (a..b).map(|j| psi1[j] * psi1[j]).sum::<f64>() * dx;
    let n2: f64 = (a..b).map(|j| psi2[j] * psi2[j]).sum::<f64>() * dx;
    let threshold = OVERLAP_FLOOR * (n1 * n2).sqrt();
    if overlap.abs() <= threshold {
        return Err(Sturm1dError::Conditioning { overlap, threshold });
    }
    Ok(h * h * (w(b - 1) - w(a - 1)) / overlap)
}

/// Repeats one period of a q = 0 (periodic) or q = 1/2 (antiperiodic) grid
/// function over `cells` periods.
pub fn bloch_extend(psi: &[f64], antiperiodic: bool, cells: usize) -> Vec<f64> {
    (0..cells)
        .flat_map(|cell| {
            let sign = if antiperiodic && cell % 2 == 1 { -1.0 } else { 1.0 };
            psi.iter().map(move |p| sign * p)
        })
        .collect()
}
