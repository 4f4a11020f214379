use crate::ClassicalError;
use magspec_lattice::{AveragedPotential, FourierPotential};

/// Averaged drift system at fixed I₁: ẏ = ε·Ĵ∇v̄ with Ĵ = [[0, −1], [1, 0]].
#[derive(Debug, Clone)]
pub struct DriftSystem {
    av: AveragedPotential,
    eps: f64,
}

impl DriftSystem {
    pub fn new(p: &FourierPotential, eps: f64, i1: f64) -> Result<Self, ClassicalError> {
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(ClassicalError::Domain(format!(
                "epsilon must be non-negative, got {eps}"
            )));
        }
        Ok(Self {
            av: p.averaged(i1)?,
            eps,
        })
    }

    pub fn from_averaged(av: AveragedPotential, eps: f64) -> Self {
        Self { av, eps }
    }

    pub fn averaged(&self) -> &AveragedPotential {
        &self.av
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn i1(&self) -> f64 {
        self.av.i1()
    }

    /// H̄ = I₁ + ε·v̄(y).
    pub fn hamiltonian(&self, y: [f64; 2]) -> f64 {
        self.av.i1() + self.eps * self.av.value(y)
    }

    pub fn field(&self, y: [f64; 2]) -> [f64; 2] {
        let g = self.av.grad(y);
        [-self.eps * g[1], self.eps * g[0]]
    }

    /// Ĵ∇v̄ without the ε factor; same orbits, time rescaled by ε.
    pub fn unit_field(&self, y: [f64; 2]) -> [f64; 2] {
        let g = self.av.grad(y);
        [-g[1], g[0]]
    }

    /// Σ|v̄_k||b_k|, a bound on |∇v̄|.
    pub fn grad_scale(&self) -> f64 {
        self.av.modes().iter().map(|m| m.c.norm() * m.b[0].hypot(m.b[1])).sum()
    }

    /// Σ|v̄_k||b_k|², a bound on the Hessian entries.
    pub fn hess_scale(&self) -> f64 {
        self.av
            .modes()
            .iter()
            .map(|m| m.c.norm() * (m.b[0].powi(2) + m.b[1].powi(2)))
            .sum()
    }

    /// Diameter of the fundamental cell (longer diagonal).
    pub fn cell_diameter(&self) -> f64 {
        let l = self.av.lattice();
        let (a1, a2) = (l.a1(), l.a2());
        let p = (a1[0] + a2[0]).hypot(a1[1] + a2[1]);
        let m = (a1[0] - a2[0]).hypot(a1[1] - a2[1]);
        p.max(m)
    }
}

/// Drift velocity Ĵ∇_y H̄ at y.
pub fn drift_field(p: &FourierPotential, eps: f64, i1: f64, y: [f64; 2]) -> Result<[f64; 2], ClassicalError> {
    Ok(DriftSystem::new(p, eps, i1)?.field(y))
}

/// Drift vector d with a conjugate f (d₁f₁ + d₂f₂ = 1); contractible
/// motion has d = 0 and no conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct DriftData {
    pub d: (i64, i64),
    pub f: Option<(i64, i64)>,
}

impl DriftData {
    pub fn zero() -> Self {
        Self { d: (0, 0), f: None }
    }

    /// Drift along a primitive integer vector d ≠ 0.
    pub fn new(d: (i64, i64)) -> Result<Self, ClassicalError> {
        let f = conjugate_vector(d)
            .ok_or_else(|| ClassicalError::Domain(format!("drift vector {d:?} is not primitive")))?;
        Ok(Self { d, f: Some(f) })
    }

    pub fn negated(&self) -> Self {
        match self.f {
            Some(f) => Self {
                d: (-self.d.0, -self.d.1),
                f: Some((-f.0, -f.1)),
            },
            None => *self,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.d == (0, 0)
    }
}

/// Integer f with d₁f₁ + d₂f₂ = 1, if d is primitive.
pub fn conjugate_vector(d: (i64, i64)) -> Option<(i64, i64)> {
    let (g, x, y) = ext_gcd(d.0, d.1);
    match g {
        1 => Some((x, y)),
        -1 => Some((-x, -y)),
        _ => None,
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugates() {
        for d in [(1, 0), (0, 1), (-1, 0), (0, -1), (2, 3), (-3, 5), (7, -4), (1, 1)] {
            let f = conjugate_vector(d).unwrap();
            assert_eq!(d.0 * f.0 + d.1 * f.1, 1, "{d:?}");
        }
        assert!(conjugate_vector((2, 4)).is_none());
        assert!(conjugate_vector((0, 0)).is_none());
    }
}
