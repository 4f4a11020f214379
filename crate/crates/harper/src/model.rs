use crate::HarperError;
use magspec_lattice::{FluxRatio, FourierPotential};
use magspec_numerics::bessel_j0;
use serde::Serialize;
use std::f64::consts::PI;

/// A'·(w(y+h) + w(y−h))/2 + B'·cos(βy)·w(y) = λ·w(y), λ = (E − I₁^μ)/ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarperModel {
    pub hop: f64,
    pub pot: f64,
    pub beta: f64,
    pub h_step: f64,
    pub i1: f64,
    pub eps: f64,
}

impl HarperModel {
    pub fn new(hop: f64, pot: f64, beta: f64, h_step: f64, i1: f64, eps: f64) -> Result<Self, HarperError> {
        if !(h_step > 0.0 && beta > 0.0 && h_step.is_finite() && beta.is_finite()) {
            return Err(HarperError::Domain(format!(
                "need h > 0 and beta > 0, got h = {h_step}, beta = {beta}"
            )));
        }
        Ok(Self {
            hop,
            pot,
            beta,
            h_step,
            i1,
            eps,
        })
    }

    pub fn energy(&self, lambda: f64) -> f64 {
        self.i1 + self.eps * lambda
    }

    pub fn lambda(&self, energy: f64) -> f64 {
        (energy - self.i1) / self.eps
    }

    /// βh/(2π), which must equal 1/η = M/N.
    pub fn shift_ratio(&self) -> f64 {
        self.beta * self.h_step / (2.0 * PI)
    }

    pub fn check_commensurate(&self, flux: FluxRatio) -> Result<(), HarperError> {
        let r = self.shift_ratio();
        let want = flux.m() as f64 / flux.n() as f64;
        if flux.n() <= 0 || (r - want).abs() > 1e-9 * want {
            return Err(HarperError::Incommensurate {
                ratio: r,
                flux: flux.to_string(),
            });
        }
        Ok(())
    }
}

/// Harper model of Landau band μ for v = A cos x₁ + B cos βx₂:
/// A' = A·J₀(√(2I₁^μ)), B' = B·J₀(β√(2I₁^μ)), I₁^μ = (μ + 1/2)h.
pub fn harper_from_landau(p: &FourierPotential, mu: u32, h: f64, eps: f64) -> Result<HarperModel, HarperError> {
    let c = p
        .as_cosine()
        .ok_or_else(|| HarperError::Domain("the Harper reduction needs the cosine example potential".into()))?;
    if !(h > 0.0) {
        return Err(HarperError::Domain(format!("h must be positive, got {h}")));
    }
    let i1 = (mu as f64 + 0.5) * h;
    let r = (2.0 * i1).sqrt();
    HarperModel::new(c.a * bessel_j0(r)?, c.b * bessel_j0(c.beta * r)?, c.beta, h, i1, eps)
}
