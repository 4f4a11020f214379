use crate::{Lattice, LatticeError};
use magspec_numerics::{adaptive_quad_periodic, bessel_j0, Complex64, Tolerance};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// One Fourier mode: index, dual vector and coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub k: (i32, i32),
    pub b: [f64; 2],
    pub c: Complex64,
}

/// Parameters of v = A cos x₁ + B cos βx₂ on the lattice a₂ = (0, 2π/β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineParams {
    pub a: f64,
    pub b: f64,
    pub beta: f64,
}

/// Real lattice-periodic potential v(x) = Σ v_k e^{i b_k·x}.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierPotential {
    lattice: Lattice,
    coeffs: BTreeMap<(i32, i32), Complex64>,
    modes: Vec<Mode>,
}

impl FourierPotential {
    /// Validates reality (v_{−k} = conj v_k within 1e-14 of the largest
    /// coefficient); exact zeros are dropped.
    pub fn new(lattice: Lattice, coeffs: BTreeMap<(i32, i32), Complex64>) -> Result<Self, LatticeError> {
        let scale = coeffs.values().map(|c| c.norm()).fold(0.0, f64::max);
        for (&(k1, k2), &c) in &coeffs {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(LatticeError::InvalidPotential(format!(
                    "coefficient ({k1},{k2}) is not finite"
                )));
            }
            let partner = coeffs.get(&(-k1, -k2)).copied().unwrap_or_default();
            if (partner - c.conj()).norm() > 1e-14 * scale {
                return Err(LatticeError::InvalidPotential(format!(
                    "v_({},{}) is not the conjugate of v_({k1},{k2}); the potential would be complex",
                    -k1, -k2
                )));
            }
        }
        let coeffs: BTreeMap<_, _> = coeffs.into_iter().filter(|(_, c)| c.norm() != 0.0).collect();
        let modes = coeffs
            .iter()
            .map(|(&k, &c)| Mode {
                k,
                b: lattice.dual(k),
                c,
            })
            .collect();
        Ok(Self { lattice, coeffs, modes })
    }

    /// Builds a real potential from coefficients of modes with k > 0
    /// lexicographically plus the mean; partners are filled in.
    pub fn from_half(lattice: Lattice, mean: f64, half: &[((i32, i32), Complex64)]) -> Result<Self, LatticeError> {
        let mut map = BTreeMap::new();
        if mean != 0.0 {
            map.insert((0, 0), Complex64::new(mean, 0.0));
        }
        for &(k, c) in half {
            if k == (0, 0) {
                return Err(LatticeError::InvalidPotential("use `mean` for the zero mode".into()));
            }
            *map.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
            *map.entry((-k.0, -k.1)).or_insert(Complex64::new(0.0, 0.0)) += c.conj();
        }
        Self::new(lattice, map)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn coeffs(&self) -> &BTreeMap<(i32, i32), Complex64> {
        &self.coeffs
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    /// Max |k₁|+|k₂| over stored modes.
    pub fn degree(&self) -> i32 {
        self.coeffs.keys().map(|k| k.0.abs() + k.1.abs()).max().unwrap_or(0)
    }

    /// Σ|v_k|, a bound on sup|v|.
    pub fn coeff_l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Mean value v₀₀.
    pub fn mean(&self) -> f64 {
        self.coeffs.get(&(0, 0)).map(|c| c.re).unwrap_or(0.0)
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        self.modes
            .iter()
            .map(|m| (m.c * Complex64::from_polar(1.0, m.b[0] * x[0] + m.b[1] * x[1])).re)
            .sum()
    }

    /// Recognizes the cosine example A cos x₁ + B cos βx₂ structurally.
    pub fn as_cosine(&self) -> Option<CosineParams> {
        if self.lattice.a21() != 0.0 {
            return None;
        }
        let get = |k| self.coeffs.get(&k).copied().unwrap_or_default();
        let allowed = [(1, 0), (-1, 0), (0, 1), (0, -1)];
        if self.coeffs.keys().any(|k| !allowed.contains(k)) {
            return None;
        }
        let (c1, c2) = (get((1, 0)), get((0, 1)));
        if c1.im != 0.0 || c2.im != 0.0 || c1.re < 0.0 || c2.re < 0.0 {
            return None;
        }
        Some(CosineParams {
            a: 2.0 * c1.re,
            b: 2.0 * c2.re,
            beta: 2.0 * PI / self.lattice.a22(),
        })
    }

    /// Bessel-damped coefficients at cyclotron action I₁.
    pub fn averaged(&self, i1: f64) -> Result<AveragedPotential, LatticeError> {
        if !(i1.is_finite() && i1 >= 0.0) {
            return Err(LatticeError::Domain(format!("I1 must be non-negative, got {i1}")));
        }
        let r = (2.0 * i1).sqrt();
        let mut modes = Vec::with_capacity(self.modes.len());
        for m in &self.modes {
            let damp = if m.k == (0, 0) {
                1.0
            } else {
                bessel_j0(r * m.b[0].hypot(m.b[1]))?
            };
            modes.push(Mode { c: m.c * damp, ..*m });
        }
        Ok(AveragedPotential {
            lattice: self.lattice,
            i1,
            modes,
        })
    }
}

/// v̄(I₁, ·) as a trigonometric polynomial in y, with derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragedPotential {
    lattice: Lattice,
    i1: f64,
    modes: Vec<Mode>,
}

impl AveragedPotential {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn i1(&self) -> f64 {
        self.i1
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    /// Σ|v̄_k|.
    pub fn coeff_l1(&self) -> f64 {
        self.modes.iter().map(|m| m.c.norm()).sum()
    }

    /// Coefficient of the zero mode.
    pub fn mean(&self) -> f64 {
        self.modes.iter().find(|m| m.k == (0, 0)).map(|m| m.c.re).unwrap_or(0.0)
    }

    pub fn value(&self, y: [f64; 2]) -> f64 {
        self.modes
            .iter()
            .map(|m| (m.c * Complex64::from_polar(1.0, m.b[0] * y[0] + m.b[1] * y[1])).re)
            .sum()
    }

    pub fn grad(&self, y: [f64; 2]) -> [f64; 2] {
        let mut g = [0.0; 2];
        for m in &self.modes {
            // d/dy e^{ib·y} = i b e^{ib·y}
            let z = m.c * Complex64::from_polar(1.0, m.b[0] * y[0] + m.b[1] * y[1]);
            let d = -z.im;
            g[0] += m.b[0] * d;
            g[1] += m.b[1] * d;
        }
        g
    }

    /// Value, gradient and Hessian [[∂₁₁, ∂₁₂], [∂₂₁, ∂₂₂]] in one pass.
    pub fn jet(&self, y: [f64; 2]) -> (f64, [f64; 2], [[f64; 2]; 2]) {
        let mut v = 0.0;
        let mut g = [0.0; 2];
        let mut hs = [[0.0; 2]; 2];
        for m in &self.modes {
            let z = m.c * Complex64::from_polar(1.0, m.b[0] * y[0] + m.b[1] * y[1]);
            v += z.re;
            g[0] -= m.b[0] * z.im;
            g[1] -= m.b[1] * z.im;
            for i in 0..2 {
                for j in 0..2 {
                    hs[i][j] -= m.b[i] * m.b[j] * z.re;
                }
            }
        }
        (v, g, hs)
    }
}

/// v̄(I₁, y) from the Bessel-damped series.
pub fn averaged_potential(p: &FourierPotential, i1: f64, y: [f64; 2]) -> Result<f64, LatticeError> {
    Ok(p.averaged(i1)?.value(y))
}

/// v̄(I₁, y) as the cyclotron-circle mean (1/2π)∫v(√(2I₁)sin φ + y₁,
/// √(2I₁)cos φ + y₂)dφ, computed by quadrature of the potential itself.
pub fn averaged_potential_oracle(
    p: &FourierPotential,
    i1: f64,
    y: [f64; 2],
    tol: Tolerance,
) -> Result<f64, LatticeError> {
    if !(i1.is_finite() && i1 >= 0.0) {
        return Err(LatticeError::Domain(format!("I1 must be non-negative, got {i1}")));
    }
    let r = (2.0 * i1).sqrt();
    let integral = adaptive_quad_periodic(
        |phi| p.eval([r * phi.sin() + y[0], r * phi.cos() + y[1]]),
        0.0,
        2.0 * PI,
        tol,
    )?;
    Ok(integral / (2.0 * PI))
}

/// v = A cos x₁ + B cos βx₂ on the lattice a₁ = (2π, 0), a₂ = (0, 2π/β).
pub fn cosine_example(a: f64, b: f64, beta: f64) -> Result<FourierPotential, LatticeError> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(LatticeError::Domain(format!("beta must be positive, got {beta}")));
    }
    if !(a.is_finite() && b.is_finite() && a >= 0.0 && b >= 0.0) {
        return Err(LatticeError::Domain(format!(
            "amplitudes must be non-negative, got A={a}, B={b}"
        )));
    }
    let lattice = Lattice::rectangular(2.0 * PI / beta)?;
    let half = [
        ((1, 0), Complex64::new(0.5 * a, 0.0)),
        ((0, 1), Complex64::new(0.5 * b, 0.0)),
    ];
    FourierPotential::from_half(lattice, 0.0, &half)
}
