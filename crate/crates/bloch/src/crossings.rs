use crate::BlochError;
use magspec_actions::{ActionContext, EdgeActionTable};
use magspec_classical::EdgeId;
use magspec_lattice::{FluxRatio, FourierPotential};
use magspec_numerics::{find_root, Tolerance};
use serde::Serialize;
use std::fmt::Write;
use std::sync::Arc;

/// Intersection of the increasing (d = +) and decreasing (d = −) dispersion
/// branches over q₁ ∈ [0, 1/M).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionCrossing {
    pub n_plus: i64,
    pub n_minus: i64,
    pub q1: f64,
    pub i2_plus: f64,
    pub i2_minus: f64,
    pub energy: f64,
    /// Crossing at q₁ = 0, where I₂ = hn/M.
    pub at_band_end: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingReport {
    pub i1: f64,
    pub eps: f64,
    pub flux_n: i64,
    pub flux_m: u64,
    /// At ε = 0 both branches are flat and every q₁ is a crossing.
    pub degenerate: bool,
    pub crossings: Vec<DispersionCrossing>,
}

impl CrossingReport {
    /// Header `n_plus,n_minus,q1,I2_plus,I2_minus,E,at_band_end`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n_plus,n_minus,q1,I2_plus,I2_minus,E,at_band_end\n");
        for c in &self.crossings {
            let _ = writeln!(
                s,
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                c.n_plus, c.n_minus, c.q1, c.i2_plus, c.i2_minus, c.energy, c.at_band_end
            );
        }
        s
    }
}

/// Crossings of Ẽ₊(q₁) = H̄(I₁, h(n₊/M − q₁)) on the edge drifting along +d
/// with Ẽ₋(q₁) = H̄(I₁, h(n₋/M + q₁)) on the edge drifting along −d, for
/// d = (1, 0). Each pair is searched on the q₁ range where both actions
/// lie on their edges.
pub fn dispersion_crossings(
    p: &FourierPotential,
    eps: f64,
    i1: f64,
    flux: FluxRatio,
) -> Result<CrossingReport, BlochError> {
    let lattice = *p.lattice();
    if eps == 0.0 {
        return Ok(CrossingReport {
            i1,
            eps,
            flux_n: flux.n(),
            flux_m: flux.m(),
            degenerate: true,
            crossings: Vec::new(),
        });
    }
    let ctx = Arc::new(ActionContext::new(p, eps, i1)?);
    let d = ctx.graph().drift().map(|dd| dd.d).unwrap_or((0, 0));
    if d != (1, 0) {
        return Err(BlochError::UnsupportedDrift { d });
    }
    let plus = EdgeActionTable::build(ctx.clone(), EdgeId::I2)?;
    let minus = EdgeActionTable::build(ctx.clone(), EdgeId::I3)?;
    let h = lattice.a22() / flux.value();
    let m = flux.m() as f64;
    let (lo_p, hi_p) = plus.action_range();
    let (lo_m, hi_m) = minus.action_range();
    let span = (plus.energy_range().1 - plus.energy_range().0).abs();

    let mut crossings = Vec::new();
    let qmax = 1.0 / m;
    let np = (lo_p * m / h).ceil() as i64..=((hi_p / h + qmax) * m).floor() as i64;
    let nm = ((lo_m / h - qmax) * m).ceil() as i64..=(hi_m * m / h).floor() as i64;
    for n_plus in np {
        for n_minus in nm.clone() {
            let i2p = |q1: f64| h * (n_plus as f64 / m - q1);
            let i2m = |q1: f64| h * (n_minus as f64 / m + q1);
            // q₁ range on which both actions stay on their edges.
            let qa = (n_plus as f64 / m - hi_p / h)
                .max(lo_m / h - n_minus as f64 / m)
                .max(0.0);
            let qb = (n_plus as f64 / m - lo_p / h)
                .min(hi_m / h - n_minus as f64 / m)
                .min(qmax);
            if qa >= qb {
                continue;
            }
            let level_p = |q: f64| plus.level(i2p(q).clamp(lo_p, hi_p));
            let level_m = |q: f64| minus.level(i2m(q).clamp(lo_m, hi_m));
            let gap = |q1: f64| -> Result<f64, BlochError> { Ok(level_p(q1)? - level_m(q1)?) };
            let (fa, fb) = (gap(qa)?, gap(qb)?);
            let tol_g = 1e-9 * span;
            let q1 = if qa == 0.0 && fa.abs() <= tol_g {
                0.0
            } else if (qb == qmax && fb.abs() <= tol_g) || fa.signum() == fb.signum() {
                // A zero at q₁ = 1/M belongs to the next pair at q₁ = 0.
                continue;
            } else {
                let f = |q: f64| gap(q).unwrap_or(f64::NAN);
                find_root(f, qa, qb, Tolerance::new(1e-14 / m, 1e-15, 200)?)?
            };
            let g = level_p(q1)?;
            crossings.push(DispersionCrossing {
                n_plus,
                n_minus,
                q1,
                i2_plus: i2p(q1),
                i2_minus: i2m(q1),
                energy: ctx.energy(g),
                at_band_end: q1 == 0.0,
            });
        }
    }
    Ok(CrossingReport {
        i1,
        eps,
        flux_n: flux.n(),
        flux_m: flux.m(),
        degenerate: false,
        crossings,
    })
}
