use crate::SpectraError;
use magspec_actions::{ActionContext, SeparatrixLimits};
use magspec_lattice::{FluxRatio, FourierPotential};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubbandCount {
    pub count: i64,
    /// (M/h)·[(I^{1+} − I^{4−}) + (I^{2+} − I^{2−}) + (I^{3+} − I^{3−})].
    pub value: f64,
    pub expected: i64,
    pub kirchhoff_residual: f64,
    pub limits: SeparatrixLimits,
}

const KIRCHHOFF_TOL: f64 = 1e-6;

/// Number of magneto-Bloch subbands in the Landau band at I₁^μ for the
/// rational flux N/M, counted through the edge action spans.
pub fn subband_count(
    p: &FourierPotential,
    eps: f64,
    h: f64,
    i1_mu: f64,
    flux: FluxRatio,
) -> Result<SubbandCount, SpectraError> {
    if !(h > 0.0) {
        return Err(SpectraError::Domain(format!("h must be positive, got {h}")));
    }
    let eta = p.lattice().cell_area() / (2.0 * std::f64::consts::PI * h);
    if (eta - flux.value()).abs() > 1e-9 * eta.max(1.0) {
        return Err(SpectraError::Domain(format!(
            "flux {flux} does not match a11*a22/(2*pi*h) = {eta}"
        )));
    }
    let limits = ActionContext::new(p, eps, i1_mu)?.separatrix_limits()?;
    let span =
        (limits.i1_plus - limits.i4_minus) + (limits.i2_plus - limits.i2_minus) + (limits.i3_plus - limits.i3_minus);
    let residual = span - limits.cell_action;
    if residual.abs() > KIRCHHOFF_TOL * limits.cell_action {
        return Err(SpectraError::Kirchhoff {
            residual,
            tolerance: KIRCHHOFF_TOL * limits.cell_action,
        });
    }
    let value = flux.m() as f64 / h * span;
    let count = value.round() as i64;
    if count != flux.n() {
        return Err(SpectraError::SubbandMismatch {
            value,
            expected: flux.n(),
            residual,
        });
    }
    Ok(SubbandCount {
        count,
        value,
        expected: flux.n(),
        kirchhoff_residual: residual,
        limits,
    })
}
