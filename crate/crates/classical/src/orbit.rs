//! Drift orbits integrated with the unit field Ĵ∇v̄ (time τ = εt) and an
//! augmented area coordinate A with Ȧ = y₁ẏ₂.
//!
//! Closure is detected on the section through y₀ + n·a normal to the initial
//! velocity: a − to + crossing within the closure radius of some lattice
//! image of y₀ ends the orbit with winding n. The crossing time is refined
//! by Brent's method on the size of the single step leading to it.

use crate::{ClassicalError, DriftSystem};
use magspec_lattice::FourierPotential;
use magspec_numerics::{find_root, Dopri5, Tolerance};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitOptions {
    pub tol: Tolerance,
    /// Cap on unit time τ; `None` uses 50·diam/(10⁻³·Σ|v̄_k||b_k|).
    pub period_cap: Option<f64>,
    /// Closure radius as a fraction of the cell diameter.
    pub closure_fraction: f64,
    /// Fixed-point threshold on |∇v̄| relative to Σ|v̄_k||b_k|.
    pub fixed_point_fraction: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::uniform(1e-12),
            period_cap: None,
            closure_fraction: 1e-4,
            fixed_point_fraction: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitSample {
    /// Unit time τ.
    pub tau: f64,
    pub y: [f64; 2],
    /// ∫₀^τ y₁ dy₂.
    pub area: f64,
}

/// A closed drift orbit on the torus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Orbit {
    pub samples: Vec<OrbitSample>,
    /// Lattice shift accumulated over one period.
    pub winding: (i64, i64),
    /// Period in unit time τ.
    pub unit_period: f64,
    /// Period in physical time t = τ/ε (infinite for ε = 0).
    pub period: f64,
    /// ∫ y₁ dy₂ over one period.
    pub area: f64,
    pub start: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrbitOutcome {
    FixedPoint,
    Closed(Orbit),
    /// Period cap reached before closure.
    CapExceeded {
        samples: Vec<OrbitSample>,
    },
}

pub fn trace_orbit(sys: &DriftSystem, y0: [f64; 2], opts: &OrbitOptions) -> Result<OrbitOutcome, ClassicalError> {
    let gscale = sys.grad_scale();
    let v0 = sys.unit_field(y0);
    let speed = v0[0].hypot(v0[1]);
    if gscale == 0.0 || speed <= opts.fixed_point_fraction * gscale || sys.eps() == 0.0 {
        return Ok(OrbitOutcome::FixedPoint);
    }
    let n0 = [v0[0] / speed, v0[1] / speed];
    let diam = sys.cell_diameter();
    let radius = opts.closure_fraction * diam;
    let cap = opts.period_cap.unwrap_or(50.0 * diam / (1e-3 * gscale));
    let lattice = *sys.averaged().lattice();
    let av = sys.averaged().clone();
    let rhs = move |y: &[f64], d: &mut [f64]| {
        let g = av.grad([y[0], y[1]]);
        d[0] = -g[1];
        d[1] = g[0];
        d[2] = y[0] * g[0];
    };
    let mut solver = Dopri5::new(rhs, opts.tol);
    let section = |y: [f64; 2]| -> ((i64, i64), f64, f64) {
        let (s, t) = lattice.coords([y[0] - y0[0], y[1] - y0[1]]);
        let n = (s.round() as i64, t.round() as i64);
        let shift = lattice.vector(n);
        let rel = [y[0] - y0[0] - shift[0], y[1] - y0[1] - shift[1]];
        (n, rel[0] * n0[0] + rel[1] * n0[1], rel[0].hypot(rel[1]))
    };
    let mut samples = vec![OrbitSample {
        tau: 0.0,
        y: y0,
        area: 0.0,
    }];
    let mut state = vec![y0[0], y0[1], 0.0];
    let mut tau = 0.0;
    let mut h = 1e-2 * diam / speed;
    let max_steps = opts.tol.max_iter.max(1) * 500;
    while tau < cap {
        if samples.len() > max_steps {
            return Err(ClassicalError::Numerics(magspec_numerics::NumericsError::Convergence {
                iterations: max_steps,
                estimate: tau,
                error: cap - tau,
            }));
        }
        let (next, used, suggested) = solver.advance(tau, &state, h)?;
        let cur = [next[0], next[1]];
        let (n, s_cur, _) = section(cur);
        let prev = [state[0], state[1]];
        let shift = lattice.vector(n);
        let rel_prev = [prev[0] - y0[0] - shift[0], prev[1] - y0[1] - shift[1]];
        let s_prev = rel_prev[0] * n0[0] + rel_prev[1] * n0[1];
        if s_prev < 0.0 && s_cur >= 0.0 {
            let target = [y0[0] + shift[0], y0[1] + shift[1]];
            let dt = if s_cur == 0.0 {
                used
            } else {
                refine_crossing(
                    |dt| {
                        let (y, _) = solver.step(&state, dt);
                        (y[0] - target[0]) * n0[0] + (y[1] - target[1]) * n0[1]
                    },
                    used,
                )?
            };
            let (y_end, _) = solver.step(&state, dt);
            let end = [y_end[0], y_end[1]];
            let miss = (end[0] - target[0]).hypot(end[1] - target[1]);
            if miss < radius && tau + dt > 0.0 {
                let unit_period = tau + dt;
                samples.push(OrbitSample {
                    tau: unit_period,
                    y: end,
                    area: y_end[2],
                });
                let eps = sys.eps();
                return Ok(OrbitOutcome::Closed(Orbit {
                    samples,
                    winding: n,
                    unit_period,
                    period: if eps > 0.0 { unit_period / eps } else { f64::INFINITY },
                    area: y_end[2],
                    start: y0,
                }));
            }
        }
        tau += used;
        state = next;
        samples.push(OrbitSample {
            tau,
            y: cur,
            area: state[2],
        });
        h = suggested;
    }
    Ok(OrbitOutcome::CapExceeded { samples })
}

fn refine_crossing<F: FnMut(f64) -> f64>(mut f: F, used: f64) -> Result<f64, ClassicalError> {
    let tol = Tolerance::new(1e-15 * used.max(1e-300), 1e-15, 200).map_err(ClassicalError::Numerics)?;
    let lo = f(0.0);
    if lo >= 0.0 {
        return Ok(0.0);
    }
    Ok(find_root(&mut f, 0.0, used, tol)?)
}

/// Outcome of integrating a single drift trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    FixedPoint,
    Closed { winding: (i64, i64), period: f64 },
    NearSeparatrix { integrated_time: f64 },
}

/// Integrates the drift system from y₀ and classifies the motion.
pub fn classify_trajectory(
    p: &FourierPotential,
    eps: f64,
    i1: f64,
    y0: [f64; 2],
    opts: &OrbitOptions,
) -> Result<Classification, ClassicalError> {
    let sys = DriftSystem::new(p, eps, i1)?;
    Ok(match trace_orbit(&sys, y0, opts)? {
        OrbitOutcome::FixedPoint => Classification::FixedPoint,
        OrbitOutcome::Closed(o) => Classification::Closed {
            winding: o.winding,
            period: o.period,
        },
        OrbitOutcome::CapExceeded { samples } => {
            let tau = samples.last().map(|s| s.tau).unwrap_or(0.0);
            Classification::NearSeparatrix {
                integrated_time: if eps > 0.0 { tau / eps } else { f64::INFINITY },
            }
        }
    })
}

/// max |H − mean H| of the original Hamiltonian H = I₁ + ε·v(√(2I₁)sin φ +
/// y₁, √(2I₁)cos φ + y₂) along one drift period of the orbit through y₀,
/// lifted with the fast phase φ(t) = φ₀ + t. The mean is the time average.
pub fn lifted_hamiltonian_oscillation(
    p: &FourierPotential,
    eps: f64,
    i1: f64,
    y0: [f64; 2],
    phi0: f64,
    opts: &OrbitOptions,
) -> Result<f64, ClassicalError> {
    let sys = DriftSystem::new(p, eps, i1)?;
    let orbit = match trace_orbit(&sys, y0, opts)? {
        OrbitOutcome::Closed(o) => o,
        _ => return Err(ClassicalError::Domain("trajectory is not a closed drift orbit".into())),
    };
    let r = (2.0 * i1).sqrt();
    // Resample densely in physical time so the fast phase is resolved.
    let period = orbit.period;
    let count = ((period / 0.05).ceil() as usize).clamp(64, 2_000_000);
    let mut values = Vec::with_capacity(count);
    let mut idx = 0;
    for k in 0..count {
        let t = period * k as f64 / count as f64;
        let tau = t * eps;
        while idx + 1 < orbit.samples.len() - 1 && orbit.samples[idx + 1].tau < tau {
            idx += 1;
        }
        let (a, b) = (orbit.samples[idx], orbit.samples[idx + 1]);
        let w = if b.tau > a.tau {
            (tau - a.tau) / (b.tau - a.tau)
        } else {
            0.0
        };
        let y = [a.y[0] + w * (b.y[0] - a.y[0]), a.y[1] + w * (b.y[1] - a.y[1])];
        let phi = phi0 + t;
        values.push(i1 + eps * p.eval([r * phi.sin() + y[0], r * phi.cos() + y[1]]));
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max))
}
