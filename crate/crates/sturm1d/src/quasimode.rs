//! Harmonic (Hermite–Gaussian) quasimodes at the bottom of the well and the
//! distance bound dist(E, spec) ≤ ‖(L − E)ψ‖/‖ψ‖.

use std::f64::consts::{PI, TAU};

use magspec_numerics::Complex64;
use serde::Serialize;

use crate::{fd_bloch_oracle, Potential1D, Sturm1dError};

/// Periodization range: images ψ(x − 2πl) for |l| ≤ IMAGES.
const IMAGES: i64 = 3;

/// Hermite polynomial H_ν(u) by the three-term recurrence.
pub fn hermite(nu: usize, u: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * u);
    if nu == 0 {
        return prev;
    }
    for k in 1..nu {
        let next = 2.0 * u * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Residual of the Bloch-periodized quasimode e^{−u²/2}H_ν(u), u = √(ω₀/2h)(x − x_min),
/// ω₀ = √(2v₂), for a potential `v` whose minimum v_min sits at x_min with
/// curvature v₂. Uses the exact identity
/// (−h²∂² + v − E)ψ = (v(x) − v_min − v₂s²/2)ψ, s = x − x_min,
/// at E = v_min + h(ν + ½)ω₀, sampled on `grid` points of one period.
/// Returns (E, ‖(L − E)Ψ‖/‖Ψ‖).
#[allow(clippy::too_many_arguments)]
pub fn harmonic_quasimode_residual<F: Fn(f64) -> f64>(
    v: F,
    x_min: f64,
    v_min: f64,
    v2: f64,
    h: f64,
    nu: usize,
    q: f64,
    grid: usize,
) -> Result<(f64, f64), Sturm1dError> {
    if !(v2 > 0.0 && h > 0.0) || grid < 2 {
        return Err(Sturm1dError::Domain(format!(
            "need v'' > 0, h > 0, grid ≥ 2 (got {v2}, {h}, {grid})"
        )));
    }
    let omega0 = (2.0 * v2).sqrt();
    let e = v_min + h * (nu as f64 + 0.5) * omega0;
    let scale = (omega0 / (2.0 * h)).sqrt();
    let dx = TAU / grid as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for j in 0..grid {
        let x = x_min - PI + j as f64 * dx;
        let vx = v(x);
        let (mut psi, mut res) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for l in -IMAGES..=IMAGES {
            let s = x - x_min - TAU * l as f64;
            let u = scale * s;
            let phase = Complex64::from_polar(1.0, TAU * q * l as f64);
            let term = phase * ((-0.5 * u * u).exp() * hermite(nu, u));
            psi += term;
            res += term * (vx - v_min - 0.5 * v2 * s * s);
        }
        num += res.norm_sqr();
        den += psi.norm_sqr();
    }
    Ok((e, (num / den).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasimodeReport {
    pub nu: usize,
    pub q: f64,
    pub e_qm: f64,
    pub residual_ratio: f64,
    pub oracle_distance: f64,
    pub dx: f64,
    /// Discretization slack 10Δx² allowed on top of the residual.
    pub slack: f64,
}

impl QuasimodeReport {
    pub fn bound_holds(&self) -> bool {
        self.oracle_distance <= self.residual_ratio + self.slack
    }
}

/// Builds the level-ν harmonic quasimode of `v`, its residual, and its
/// distance to the oracle spectrum at q (grid N, extrapolated with 2N).
pub fn quasimode_distance_check(
    v: &Potential1D,
    h: f64,
    nu: usize,
    q: f64,
    grid: usize,
) -> Result<QuasimodeReport, Sturm1dError> {
    v.require_morse()?;
    let (e_qm, residual_ratio) =
        harmonic_quasimode_residual(|x| v.value(x), v.x_min(), v.v_min(), v.d2(v.x_min()), h, nu, q, grid)?;
    if e_qm >= v.v_max() - v.delta() {
        return Err(Sturm1dError::Domain(format!(
            "quasimode level {e_qm} is not in the bottom domain"
        )));
    }
    let spectrum = fd_bloch_oracle(v, h, q, grid, (nu + 3).min(grid / 4))?;
    let oracle_distance = spectrum.iter().map(|l| (l - e_qm).abs()).fold(f64::INFINITY, f64::min);
    let dx = TAU / grid as f64;
    Ok(QuasimodeReport {
        nu,
        q,
        e_qm,
        residual_ratio,
        oracle_distance,
        dx,
        slack: 10.0 * dx * dx,
    })
}
