use crate::BlochError;
use magspec_classical::RegimeKind;
use magspec_lattice::FluxRatio;
use serde::Serialize;

/// Quasimomentum q ∈ [0, 1/M) × [0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiMomentum {
    q1: f64,
    q2: f64,
}

impl QuasiMomentum {
    pub fn new(flux: FluxRatio, q1: f64, q2: f64) -> Result<Self, BlochError> {
        let m = flux.m() as f64;
        if !(0.0..1.0 / m).contains(&q1) || !(0.0..1.0).contains(&q2) {
            return Err(BlochError::Domain(format!(
                "q = ({q1}, {q2}) outside [0, 1/{m}) x [0, 1)"
            )));
        }
        Ok(Self { q1, q2 })
    }

    pub fn q1(&self) -> f64 {
        self.q1
    }

    pub fn q2(&self) -> f64 {
        self.q2
    }
}

/// M² for boundary regimes (M families of M members), 2M for interior
/// regimes (one family per open edge).
pub fn degeneracy_counts(flux: FluxRatio, kind: RegimeKind) -> u64 {
    let m = flux.m();
    match kind {
        RegimeKind::Boundary => m * m,
        RegimeKind::Interior => 2 * m,
    }
}
