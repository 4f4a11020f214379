//! Semiclassical band formulas for −h²ψ'' + vψ = Eψ with Bloch condition
//! Ψ(x + 2π) = e^{2πiq}Ψ(x).

use std::f64::consts::{PI, TAU};

use magspec_numerics::{adaptive_quad, adaptive_quad_periodic, find_root, Tolerance};
use serde::Serialize;

use crate::{Potential1D, Sturm1dError};

const QUAD_TOL: f64 = 1e-13;
const PERIOD_TOL: f64 = 1e-10;

fn quad_tol() -> Tolerance {
    Tolerance {
        abs_tol: QUAD_TOL,
        rel_tol: QUAD_TOL,
        max_iter: 4000,
    }
}

/// Turning points x₋ < x_min < x₊ of the well at level E ∈ [v_min, v_max].
pub fn turning_points(v: &Potential1D, e: f64) -> Result<(f64, f64), Sturm1dError> {
    v.require_morse()?;
    if !(e >= v.v_min() && e <= v.v_max()) {
        return Err(Sturm1dError::Domain(format!(
            "level {e} outside [v_min, v_max] = [{}, {}]",
            v.v_min(),
            v.v_max()
        )));
    }
    let (xm, xr) = (v.x_min(), v.x_max_right());
    let xl = xr - TAU;
    if e <= v.v_min() {
        return Ok((xm, xm));
    }
    let tol = Tolerance::uniform(1e-15);
    let g = |x: f64| v.value(x) - e;
    let plus = if e >= v.v_max() { xr } else { find_root(g, xm, xr, tol)? };
    let minus = if e >= v.v_max() { xl } else { find_root(g, xl, xm, tol)? };
    Ok((minus, plus))
}

/// ∫ₐᵇ F(x) dx through x = c − r cos t, which smooths square-root endpoints.
fn arc_integral<F: Fn(f64) -> f64>(a: f64, b: f64, f: F) -> Result<f64, Sturm1dError> {
    arc_integral_tol(a, b, f, quad_tol())
}

fn arc_integral_tol<F: Fn(f64) -> f64>(a: f64, b: f64, f: F, tol: Tolerance) -> Result<f64, Sturm1dError> {
    let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
    if r <= 0.0 {
        return Ok(0.0);
    }
    Ok(adaptive_quad(|t| f(c - r * t.cos()) * r * t.sin(), 0.0, PI, tol)?)
}

/// I¹(E) = (1/π)∫_{x₋}^{x₊} √(E − v) dx on [v_min, v_max].
pub fn action_lower(v: &Potential1D, e: f64) -> Result<f64, Sturm1dError> {
    let (xm, xp) = turning_points(v, e)?;
    Ok(arc_integral(xm, xp, |x| (e - v.value(x)).max(0.0).sqrt())? / PI)
}

/// I(E) = (1/2π)∫₀^{2π} √(E − v) dx for E ≥ v_max.
pub fn action_upper(v: &Potential1D, e: f64) -> Result<f64, Sturm1dError> {
    if e < v.v_max() {
        return Err(Sturm1dError::Domain(format!(
            "level {e} is below v_max = {}",
            v.v_max()
        )));
    }
    if v.is_constant() {
        return Ok((e - v.v_max()).sqrt());
    }
    if e == v.v_max() {
        // The integrand has a |x − x_max| kink; integrate the two monotone arcs.
        let (xm, xr) = (v.x_min(), v.x_max_right());
        let f = |x: f64| (e - v.value(x)).max(0.0).sqrt();
        let total = arc_integral(xr - TAU, xm, f)? + arc_integral(xm, xr, f)?;
        return Ok(total / TAU);
    }
    let tol = quad_tol();
    Ok(adaptive_quad_periodic(|x| (e - v.value(x)).max(0.0).sqrt(), 0.0, TAU, tol)? / TAU)
}

/// Classical frequency ω(E) = 2π / ∫_{x₋}^{x₊} dx/√(E − v).
pub fn classical_frequency(v: &Potential1D, e: f64) -> Result<f64, Sturm1dError> {
    let (xm, xp) = turning_points(v, e)?;
    // Cancellation in E − v near the turning points limits this integrand to
    // about 1e-11 relative accuracy.
    let tol = Tolerance {
        abs_tol: PERIOD_TOL,
        rel_tol: PERIOD_TOL,
        max_iter: 4000,
    };
    let period = arc_integral_tol(
        xm,
        xp,
        |x| {
            let d = e - v.value(x);
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                0.0
            }
        },
        tol,
    )?;
    Ok(TAU / period)
}

/// Tunnelling exponent ρ(E) = ∫ √(v − E) over the forbidden arc (x₊, x₋ + 2π).
pub fn agmon_distance(v: &Potential1D, e: f64) -> Result<f64, Sturm1dError> {
    let (xm, xp) = turning_points(v, e)?;
    arc_integral(xp, xm + TAU, |x| (v.value(x) - e).max(0.0).sqrt())
}

/// Bohr–Sommerfeld levels E_{1,ν}: I¹(E) = h(ν + ½) for every ν with
/// E < v_max − δ.
pub fn bs_levels_lower(v: &Potential1D, h: f64) -> Result<Vec<f64>, Sturm1dError> {
    check_h(h)?;
    if v.is_constant() {
        return Ok(Vec::new());
    }
    v.require_morse()?;
    let lo = v.v_min();
    let hi = v.v_max() - v.delta();
    let i_hi = action_lower(v, hi)?;
    let tol = Tolerance::uniform(1e-14);
    let mut levels = Vec::new();
    for nu in 0.. {
        let target = h * (nu as f64 + 0.5);
        if target >= i_hi {
            break;
        }
        let e = find_root(|e| action_lower(v, e).unwrap_or(f64::NAN) - target, lo, hi, tol)?;
        levels.push(e);
    }
    Ok(levels)
}

/// Lower-domain band width 2·(ω(E)h/π)·e^{−ρ(E)/h} at E = E_{1,ν}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBandWidth {
    pub nu: usize,
    pub energy: f64,
    pub omega: f64,
    pub rho: f64,
    pub width: f64,
    /// ln(width), finite even when the width underflows.
    pub log_width: f64,
}

/// Width formula for band ν. The level must lie in (v_min, v_max − δ): the
/// exponent is the tested content and stays meaningful down to the ground band.
pub fn band_width_lower(v: &Potential1D, h: f64, nu: usize) -> Result<LowerBandWidth, Sturm1dError> {
    let levels = bs_levels_lower(v, h)?;
    let energy = *levels.get(nu).ok_or_else(|| {
        Sturm1dError::Domain(format!(
            "level {nu} is not below v_max − δ (only {} levels)",
            levels.len()
        ))
    })?;
    let omega = classical_frequency(v, energy)?;
    let rho = agmon_distance(v, energy)?;
    let log_width = (2.0 * omega * h / PI).ln() - rho / h;
    Ok(LowerBandWidth {
        nu,
        energy,
        omega,
        rho,
        width: log_width.exp(),
        log_width,
    })
}

/// Relative dispersion shape (−1)^{ν+1}cos 2πq + 1 of a lower band, in [0, 2].
pub fn lower_dispersion_shape(nu: usize, q: f64) -> f64 {
    let sign = if nu % 2 == 0 { -1.0 } else { 1.0 };
    sign * (TAU * q).cos() + 1.0
}

/// Solves I(E) = target for E ≥ v_max.
fn invert_upper(v: &Potential1D, target: f64) -> Result<f64, Sturm1dError> {
    if v.is_constant() {
        return Ok(v.v_max() + target * target);
    }
    let lo = v.v_max();
    let i_lo = action_upper(v, lo)?;
    if target < i_lo {
        return Err(Sturm1dError::Domain(format!(
            "action {target} is below I(v_max) = {i_lo}"
        )));
    }
    // I(E) ≥ √(E − v_max), so E = v_max + target² brackets from above.
    let hi = lo + target * target + (v.v_max() - v.v_min()) + 1.0;
    let tol = Tolerance::uniform(1e-14);
    Ok(find_root(
        |e| action_upper(v, e).unwrap_or(f64::NAN) - target,
        lo,
        hi,
        tol,
    )?)
}

/// Upper-domain gap ends 𝓔_ν: I(𝓔) = hν/2 with v_max + δ < 𝓔 ≤ e_max.
/// For constant v every ν ≥ 0 qualifies.
pub fn gap_ends_upper(v: &Potential1D, h: f64, e_max: f64) -> Result<Vec<(usize, f64)>, Sturm1dError> {
    check_h(h)?;
    let floor = v.v_max() + v.delta();
    let i_floor = if v.is_constant() { 0.0 } else { action_upper(v, floor)? };
    let strict = !v.is_constant();
    let mut out = Vec::new();
    let first = (2.0 * i_floor / h).floor() as usize;
    for nu in first.. {
        let target = h * nu as f64 / 2.0;
        if strict && target <= i_floor {
            continue;
        }
        let e = invert_upper(v, target)?;
        if e > e_max {
            break;
        }
        out.push((nu, e));
    }
    Ok(out)
}

/// Piecewise action I_ν(q, h) of an upper band.
pub fn upper_band_action(nu: usize, q: f64, h: f64) -> f64 {
    let n = nu as f64;
    let q = q.rem_euclid(1.0);
    if nu % 2 == 0 {
        if q < 0.5 {
            h * (n / 2.0 + q)
        } else {
            h * (n / 2.0 + 1.0 - q)
        }
    } else if q < 0.5 {
        h * ((n + 1.0) / 2.0 - q)
    } else {
        h * ((n - 1.0) / 2.0 + q)
    }
}

/// Dispersion E_ν(q) in the upper domain: I(E) = I_ν(q, h).
pub fn dispersion_upper(v: &Potential1D, h: f64, nu: usize, q: f64) -> Result<f64, Sturm1dError> {
    check_h(h)?;
    let floor = v.v_max() + v.delta();
    if !v.is_constant() && action_upper(v, floor)? >= h * nu as f64 / 2.0 {
        return Err(Sturm1dError::Domain(format!("band {nu} is not above v_max + δ")));
    }
    invert_upper(v, upper_band_action(nu, q, h))
}

/// Weyl band count N(E). Inside the transient layer |E − v_max| < δ both
/// one-sided values are reported and `in_layer` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylCount {
    pub energy: f64,
    /// I¹(min(E, v_max))/h.
    pub lower: f64,
    /// 2I(max(E, v_max))/h.
    pub upper: f64,
    pub in_layer: bool,
}

impl WeylCount {
    /// The applicable one-sided value, or None inside the layer.
    pub fn value(&self, v: &Potential1D) -> Option<f64> {
        if self.in_layer {
            None
        } else if self.energy < v.v_max() {
            Some(self.lower)
        } else {
            Some(self.upper)
        }
    }
}

/// Phase-space area of {p² + v ≤ E} over one period, divided by 2πh.
pub fn weyl_count_1d(v: &Potential1D, e: f64, h: f64) -> Result<WeylCount, Sturm1dError> {
    check_h(h)?;
    if e <= v.v_min() {
        return Ok(WeylCount {
            energy: e,
            lower: 0.0,
            upper: 0.0,
            in_layer: false,
        });
    }
    if v.is_constant() {
        let n = 2.0 * (e - v.v_max()).sqrt() / h;
        return Ok(WeylCount {
            energy: e,
            lower: n,
            upper: n,
            in_layer: false,
        });
    }
    let lower = action_lower(v, e.min(v.v_max()))? / h;
    let upper = 2.0 * action_upper(v, e.max(v.v_max()))? / h;
    Ok(WeylCount {
        energy: e,
        lower,
        upper,
        in_layer: (e - v.v_max()).abs() < v.delta(),
    })
}

fn check_h(h: f64) -> Result<(), Sturm1dError> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Sturm1dError::Domain(format!("h must be positive and finite (got {h})")))
    }
}
