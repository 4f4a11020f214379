use crate::LatticeError;
use std::f64::consts::PI;

/// Period lattice generated by a₁ = (2π, 0) and a₂ = (a21, a22), a22 > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    a21: f64,
    a22: f64,
}

impl Lattice {
    pub fn new(a21: f64, a22: f64) -> Result<Self, LatticeError> {
        if !a21.is_finite() || !a22.is_finite() || a22 <= 0.0 {
            return Err(LatticeError::Domain(format!(
                "lattice needs finite a21 and a22 > 0, got ({a21}, {a22})"
            )));
        }
        Ok(Self { a21, a22 })
    }

    /// Rectangular lattice with a₂ = (0, a22).
    pub fn rectangular(a22: f64) -> Result<Self, LatticeError> {
        Self::new(0.0, a22)
    }

    pub fn a1(&self) -> [f64; 2] {
        [2.0 * PI, 0.0]
    }

    pub fn a2(&self) -> [f64; 2] {
        [self.a21, self.a22]
    }

    pub fn a21(&self) -> f64 {
        self.a21
    }

    pub fn a22(&self) -> f64 {
        self.a22
    }

    /// Cell area a11·a22 = 2π·a22.
    pub fn cell_area(&self) -> f64 {
        2.0 * PI * self.a22
    }

    /// Dual-lattice vector b_k with b_k·a₁ = 2πk₁ and b_k·a₂ = 2πk₂.
    pub fn dual(&self, k: (i32, i32)) -> [f64; 2] {
        let (k1, k2) = (k.0 as f64, k.1 as f64);
        [k1, (2.0 * PI * k2 - k1 * self.a21) / self.a22]
    }

    /// Point s·a₁ + t·a₂.
    pub fn point(&self, s: f64, t: f64) -> [f64; 2] {
        [2.0 * PI * s + t * self.a21, t * self.a22]
    }

    /// Inverse of [`Lattice::point`].
    pub fn coords(&self, x: [f64; 2]) -> (f64, f64) {
        let t = x[1] / self.a22;
        ((x[0] - t * self.a21) / (2.0 * PI), t)
    }

    /// Lattice vector n₁a₁ + n₂a₂.
    pub fn vector(&self, n: (i64, i64)) -> [f64; 2] {
        self.point(n.0 as f64, n.1 as f64)
    }

    /// Representative of x in the fundamental cell (coords in [0,1)²) and
    /// the lattice shift that was removed.
    pub fn reduce(&self, x: [f64; 2]) -> ([f64; 2], (i64, i64)) {
        let (s, t) = self.coords(x);
        let (n1, n2) = (s.floor(), t.floor());
        let mut fs = s - n1;
        let mut ft = t - n2;
        if fs >= 1.0 {
            fs = 0.0;
        }
        if ft >= 1.0 {
            ft = 0.0;
        }
        (self.point(fs, ft), (n1 as i64, n2 as i64))
    }
}
