use crate::{BlochError, CylinderAlgebra, QuasiMomentum};
use magspec_lattice::{FluxRatio, Lattice};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Drift orientation d = (±1, 0) of an interior family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn drift(self) -> (i64, i64) {
        (self.value(), 0)
    }
}

/// Quantized I₂^± = h(n/M ∓ q₁), h = a₂₂/η.
pub fn interior_i2(flux: FluxRatio, lattice: &Lattice, q1: f64, sign: Sign, n: i64) -> f64 {
    let h = lattice.a22() / flux.value();
    h * (n as f64 / flux.m() as f64 - sign.value() as f64 * q1)
}

/// Coefficients C^j_k of the interior family at quantum number n on the
/// window |k| ≤ `window`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorBlochFamily {
    pub flux: FluxRatio,
    pub q: QuasiMomentum,
    pub sign: Sign,
    pub n: i64,
    pub i2: f64,
    /// Component carrying the seed C^s_0 = 1.
    pub s: u64,
    pub window: i64,
    pub coeffs: BTreeMap<(u64, i64), Complex64>,
}

impl InteriorBlochFamily {
    pub fn get(&self, j: u64, k: i64) -> Complex64 {
        self.coeffs.get(&(j, k)).copied().unwrap_or_default()
    }

    pub fn algebra(&self, lattice: &Lattice) -> CylinderAlgebra {
        let d = self.sign.drift();
        CylinderAlgebra::new(*lattice, self.flux, d, d, self.i2).expect("d·d = 1 for d = (±1, 0)")
    }
}

/// Closed form for d = (±1, 0): s = ±nÑ mod M and
/// C^j_k = e^{iη a₂₁ k²/2 + 2πi w q₂} when w = (s ± k − j)/M is an integer,
/// zero otherwise.
pub fn interior_bloch_coeffs(
    flux: FluxRatio,
    lattice: &Lattice,
    q: QuasiMomentum,
    sign: Sign,
    n: i64,
    window: i64,
) -> Result<InteriorBlochFamily, BlochError> {
    if window < 0 {
        return Err(BlochError::Domain(format!("window must be >= 0, got {window}")));
    }
    let m = flux.m() as i64;
    let sv = sign.value();
    let s = (sv * n * flux.n_inverse_mod_m() as i64).rem_euclid(m);
    let eta = flux.value();
    let mut coeffs = BTreeMap::new();
    for j in 0..m {
        for k in -window..=window {
            let t = s + sv * k - j;
            let c = if t.rem_euclid(m) == 0 {
                let w = (t / m) as f64;
                Complex64::from_polar(1.0, 0.5 * eta * lattice.a21() * (k * k) as f64 + 2.0 * PI * w * q.q2())
            } else {
                Complex64::new(0.0, 0.0)
            };
            coeffs.insert((j as u64, k), c);
        }
    }
    let i2 = interior_i2(flux, lattice, q.q1(), sign, n);
    Ok(InteriorBlochFamily {
        flux,
        q,
        sign,
        n,
        i2,
        s: s as u64,
        window,
        coeffs,
    })
}

/// Largest residual of the two magneto-Bloch conditions, as recurrences
/// derived from the cylinder translation algebra, over all coefficients
/// whose images stay in the window.
pub fn verify_interior_recurrences(family: &InteriorBlochFamily, lattice: &Lattice) -> f64 {
    let alg = family.algebra(lattice);
    residual_on_window(&alg, family.flux, family.q, family.window, |j, k| family.get(j, k))
}

pub(crate) fn residual_on_window<F: Fn(u64, i64) -> Complex64>(
    alg: &CylinderAlgebra,
    flux: FluxRatio,
    q: QuasiMomentum,
    window: i64,
    c: F,
) -> f64 {
    let mut worst = 0.0f64;
    for row in bloch_equations(alg, flux, q, window) {
        let v: Complex64 = row.iter().map(|&((j, k), w)| w * c(j, k)).sum();
        worst = worst.max(v.norm());
    }
    worst
}

/// Linear equations Σ w·C^j_k = 0 expressing both magneto-Bloch conditions
/// on |k| ≤ `window`; equations touching indices outside are dropped.
pub(crate) fn bloch_equations(
    alg: &CylinderAlgebra,
    flux: FluxRatio,
    q: QuasiMomentum,
    window: i64,
) -> Vec<Vec<((u64, i64), Complex64)>> {
    let m = flux.m();
    let eta = flux.value();
    let a21 = alg.lattice().a21();
    let mut rows = Vec::new();
    for j in 0..m {
        let lam = Complex64::from_polar(1.0, -2.0 * PI * (q.q1() - j as f64 * eta));
        let (next, tau) = if j + 1 < m {
            (j + 1, 0.0)
        } else {
            (0, -2.0 * PI * q.q2())
        };
        let mu = Complex64::from_polar(1.0, -0.5 * eta * a21 + tau);
        for k in -window..=window {
            // S_{−e₁}Ψ^j = λ_j Ψ^j.
            let (k1, p1) = alg.translate((-1, 0), k);
            if k1.abs() <= window {
                rows.push(vec![((j, k), p1), ((j, k1), -lam)]);
            }
            // S_{−e₂}Ψ^j = μ_j Ψ^{j+1}.
            let (k2, p2) = alg.translate((0, -1), k);
            if k2.abs() <= window {
                rows.push(vec![((j, k), p2), ((next, k2), -mu)]);
            }
        }
    }
    rows
}
