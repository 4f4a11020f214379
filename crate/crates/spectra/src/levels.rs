use crate::SpectraError;
use serde::Serialize;

/// I₁^μ = (μ + ½)·h.
pub fn landau_level(mu: u32, h: f64) -> Result<f64, SpectraError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(SpectraError::Domain(format!("h must be positive, got {h}")));
    }
    Ok((mu as f64 + 0.5) * h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ManifoldKind {
    /// Liouville torus: two basis cycles.
    Torus,
    /// Quantized cylinder: one basis cycle.
    Cylinder,
}

/// Maslov indices of the basis cycles.
pub fn maslov_indices(kind: ManifoldKind) -> Vec<i32> {
    match kind {
        ManifoldKind::Torus => vec![2, 2],
        ManifoldKind::Cylinder => vec![2],
    }
}

/// Offset in h(n + Ind/4) for a cycle of Maslov index `index`.
pub fn quantization_shift(index: i32) -> f64 {
    index as f64 / 4.0
}
