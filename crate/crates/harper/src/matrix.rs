use crate::{HarperError, HarperModel};
use magspec_lattice::{FluxRatio, FourierPotential};
use magspec_numerics::{Complex64, HermitianMatrix};
use std::f64::consts::PI;

/// Floquet-reduced Harper matrix on sites φ_j = φ₀ + 2πMj/N: hopping A'/2 on
/// the N-cycle with boundary phase e^{iNθ₁}, diagonal B'·cos φ_j.
pub fn bloch_matrix(
    model: &HarperModel,
    flux: FluxRatio,
    theta1: f64,
    phi0: f64,
) -> Result<HermitianMatrix, HarperError> {
    model.check_commensurate(flux)?;
    let n = flux.n() as usize;
    let m = flux.m() as f64;
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    let hop = 0.5 * model.hop;
    for j in 0..n {
        let phi = phi0 + 2.0 * PI * m * j as f64 / n as f64;
        a[j * n + j] += Complex64::new(model.pot * phi.cos(), 0.0);
        // w_{j+1}, wrapping with w_{j+N} = e^{iNθ₁} w_j.
        let up = if j + 1 == n {
            Complex64::from_polar(1.0, n as f64 * theta1)
        } else {
            Complex64::new(1.0, 0.0)
        };
        a[j * n + (j + 1) % n] += hop * up;
        let down = if j == 0 {
            Complex64::from_polar(1.0, -(n as f64) * theta1)
        } else {
            Complex64::new(1.0, 0.0)
        };
        a[j * n + (j + n - 1) % n] += hop * down;
    }
    Ok(HermitianMatrix::from_fn(n, |i, j| {
        0.5 * (a[i * n + j] + a[j * n + i].conj())
    }))
}

/// Bloch matrix of the Weyl quantization of v̄(I₁^μ, y) with y₁ → −ih∂/∂y₂,
/// I₁^μ = (μ + 1/2)h. Mode k acts as
/// w(y) ↦ v̄_k e^{ib₂(y + k₁h/2)} w(y + k₁h), so on sites y_j = y₀ + jh with
/// φ_j = 2πy_j/a₂₂ it is a hop of k₁ sites with phase e^{ik₂(φ_j + πMk₁/N)}.
/// Entries are in λ units, E = I₁^μ + ελ. Requires a₂₁ = 0.
pub fn general_symbol_matrix(
    p: &FourierPotential,
    mu: u32,
    h: f64,
    flux: FluxRatio,
    theta1: f64,
    phi0: f64,
) -> Result<HermitianMatrix, HarperError> {
    let lat = p.lattice();
    if lat.a21() != 0.0 {
        return Err(HarperError::Domain(format!(
            "the one-dimensional reduction needs a rectangular lattice, got a21 = {}",
            lat.a21()
        )));
    }
    let eta = lat.a22() / h;
    let want = flux.value();
    if flux.n() <= 0 || (eta - want).abs() > 1e-9 * want {
        return Err(HarperError::Incommensurate {
            ratio: 1.0 / eta,
            flux: flux.to_string(),
        });
    }
    let av = p.averaged((mu as f64 + 0.5) * h)?;
    let n = flux.n();
    let m = flux.m() as f64;
    let nu = n as usize;
    let mut a = vec![Complex64::new(0.0, 0.0); nu * nu];
    for mode in av.modes() {
        let (k1, k2) = (mode.k.0 as i64, mode.k.1 as i64);
        for j in 0..n {
            let phi = phi0 + 2.0 * PI * m * j as f64 / n as f64;
            let target = j + k1;
            let wraps = target.div_euclid(n);
            let phase = k2 as f64 * (phi + PI * m * k1 as f64 / n as f64) + wraps as f64 * n as f64 * theta1;
            a[j as usize * nu + target.rem_euclid(n) as usize] += mode.c * Complex64::from_polar(1.0, phase);
        }
    }
    Ok(HermitianMatrix::from_fn(nu, |i, j| {
        0.5 * (a[i * nu + j] + a[j * nu + i].conj())
    }))
}
