use crate::SpectraError;
use magspec_lattice::FourierPotential;
use magspec_numerics::{adaptive_quad, Tolerance};
use rayon::prelude::*;
use std::f64::consts::PI;

/// ṽ(ψ) = v̄(I, y) − v(y₁ + √(2I) sin ψ, y₂ + √(2I) cos ψ).
fn oscillating_part(p: &FourierPotential, vbar: f64, i1: f64, y: [f64; 2], psi: f64) -> f64 {
    let r = (2.0 * i1).sqrt();
    vbar - p.eval([y[0] + r * psi.sin(), y[1] + r * psi.cos()])
}

/// First-order generating function s(ψ) = ½(∫₀^ψ ṽ dφ + ∫_π^ψ ṽ dφ) at
/// slow position y.
pub fn generating_function(p: &FourierPotential, i1: f64, y: [f64; 2], psi: f64) -> Result<f64, SpectraError> {
    if !(i1 >= 0.0) {
        return Err(SpectraError::Domain(format!("I1 must be non-negative, got {i1}")));
    }
    let vbar = p.averaged(i1)?.value(y);
    let tol = Tolerance::uniform(1e-14);
    let f = |t: f64| oscillating_part(p, vbar, i1, y, t);
    Ok(0.5 * (signed_quad(f, 0.0, psi, tol)? + signed_quad(f, PI, psi, tol)?))
}

fn signed_quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64, SpectraError> {
    Ok(match a.partial_cmp(&b) {
        Some(std::cmp::Ordering::Less) => adaptive_quad(f, a, b, tol)?,
        Some(std::cmp::Ordering::Greater) => -adaptive_quad(f, b, a, tol)?,
        _ => 0.0,
    })
}

const FD_STEP: f64 = 1e-4;

/// max |∂s/∂ψ − ṽ| over `sample_count` deterministic (ψ, y) samples per I₁,
/// with ∂s/∂ψ taken by central differences.
pub fn first_order_generating_residual(
    p: &FourierPotential,
    i1_grid: &[f64],
    sample_count: usize,
) -> Result<f64, SpectraError> {
    let lattice = *p.lattice();
    // Weyl sequences with rationally independent increments.
    let frac = |x: f64| x - x.floor();
    let jobs: Vec<(f64, usize)> = i1_grid
        .iter()
        .flat_map(|&i1| (0..sample_count).map(move |j| (i1, j)))
        .collect();
    let res: Vec<Result<f64, SpectraError>> = jobs
        .par_iter()
        .map(|&(i1, j)| {
            let jf = j as f64 + 1.0;
            let psi = 2.0 * PI * frac(jf * 0.618_033_988_749_894_8);
            let y = lattice.point(frac(jf * 0.414_213_562_373_095), frac(jf * 0.732_050_807_568_877_2));
            let vbar = p.averaged(i1)?.value(y);
            let sp = generating_function(p, i1, y, psi + FD_STEP)?;
            let sm = generating_function(p, i1, y, psi - FD_STEP)?;
            Ok(((sp - sm) / (2.0 * FD_STEP) - oscillating_part(p, vbar, i1, y, psi)).abs())
        })
        .collect();
    let mut worst: f64 = 0.0;
    for r in res {
        worst = worst.max(r?);
    }
    Ok(worst)
}
