use crate::LatticeError;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Semiclassical parameter h > 0 and potential strength ε ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParams {
    pub h: f64,
    pub epsilon: f64,
}

impl SpectralParams {
    pub fn new(h: f64, epsilon: f64) -> Result<Self, LatticeError> {
        if !(h.is_finite() && h > 0.0) {
            return Err(LatticeError::Domain(format!("h must be positive, got {h}")));
        }
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(LatticeError::Domain(format!(
                "epsilon must be non-negative, got {epsilon}"
            )));
        }
        Ok(Self { h, epsilon })
    }
}

/// Physical inputs in one consistent (Gaussian) unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub b_field: f64,
    pub l0: f64,
    pub mass: f64,
    pub charge: f64,
    pub light_speed: f64,
    pub hbar: f64,
    pub vmax: f64,
}

/// Result of the physical-to-dimensionless map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub params: SpectralParams,
    /// Cyclotron frequency ω_c = |eB|/(mc).
    pub omega_c: f64,
    /// Magnetic length l_M = √(ħ/(mω_c)).
    pub magnetic_length: f64,
    /// Energy unit (eBL₀)²/(4π²mc²) of the dimensionless operator.
    pub energy_scale: f64,
}

pub fn physical_to_dimensionless(pp: &PhysicalParams) -> Result<DimensionlessParams, LatticeError> {
    let fields = [pp.b_field, pp.l0, pp.mass, pp.charge, pp.light_speed, pp.hbar, pp.vmax];
    if fields.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(LatticeError::Domain("all physical parameters must be positive".into()));
    }
    let omega_c = (pp.charge * pp.b_field).abs() / (pp.light_speed * pp.mass);
    let magnetic_length = (pp.hbar / (pp.mass * omega_c)).sqrt();
    let h = (2.0 * PI).powi(2) * (magnetic_length / pp.l0).powi(2);
    let epsilon = h * pp.vmax / (pp.hbar * omega_c);
    let energy_scale = (pp.charge * pp.b_field * pp.l0).powi(2) / (4.0 * PI * PI * pp.mass * pp.light_speed.powi(2));
    Ok(DimensionlessParams {
        params: SpectralParams::new(h, epsilon)?,
        omega_c,
        magnetic_length,
        energy_scale,
    })
}
