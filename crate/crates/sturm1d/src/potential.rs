//! Real 2π-periodic trigonometric polynomials with cached global extrema.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use magspec_numerics::{minimize_golden, Complex64};

use crate::Sturm1dError;

/// Samples per unit of polynomial degree used to locate the extrema.
const SCAN_PER_DEGREE: usize = 512;

/// v(x) = Σ_k c_k e^{ikx} with c_{−k} = conj(c_k).
#[derive(Debug, Clone, PartialEq)]
pub struct Potential1D {
    coeffs: BTreeMap<i32, Complex64>,
    v_min: f64,
    v_max: f64,
    x_min: f64,
    x_max: f64,
    minimal_morse: bool,
}

impl Potential1D {
    /// Validates the reality condition (to 1e-14 relative) and caches extrema.
    pub fn new(coeffs: BTreeMap<i32, Complex64>) -> Result<Self, Sturm1dError> {
        let scale = coeffs.values().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
        for (&k, &c) in &coeffs {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Sturm1dError::Domain(format!("coefficient {k} is not finite")));
            }
            let partner = coeffs.get(&-k).copied().unwrap_or_default();
            if (partner - c.conj()).norm() > 1e-14 * scale {
                return Err(Sturm1dError::Domain(format!(
                    "coefficients {k} and {} are not conjugate, so v is not real",
                    -k
                )));
            }
        }
        let coeffs: BTreeMap<i32, Complex64> = coeffs.into_iter().filter(|(_, c)| c.norm() > 0.0).collect();
        let mut v = Self {
            coeffs,
            v_min: 0.0,
            v_max: 0.0,
            x_min: 0.0,
            x_max: 0.0,
            minimal_morse: false,
        };
        v.locate_extrema();
        Ok(v)
    }

    /// a·cos x.
    pub fn cosine(amplitude: f64) -> Result<Self, Sturm1dError> {
        Self::from_fourier(0.0, &[(1, amplitude, 0.0)])
    }

    /// a0 + Σ (a_k cos kx + b_k sin kx) for the listed (k, a_k, b_k), k ≥ 1.
    pub fn from_fourier(a0: f64, terms: &[(u32, f64, f64)]) -> Result<Self, Sturm1dError> {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, Complex64::new(a0, 0.0));
        for &(k, a, b) in terms {
            if k == 0 {
                return Err(Sturm1dError::Domain("harmonic index must be at least 1".into()));
            }
            let c = Complex64::new(0.5 * a, -0.5 * b);
            *coeffs.entry(k as i32).or_default() += c;
            *coeffs.entry(-(k as i32)).or_default() += c.conj();
        }
        Self::new(coeffs)
    }

    pub fn coefficients(&self) -> &BTreeMap<i32, Complex64> {
        &self.coeffs
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Unique nondegenerate minimum and maximum per period.
    pub fn is_minimal_morse(&self) -> bool {
        self.minimal_morse
    }

    pub fn v_min(&self) -> f64 {
        self.v_min
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    /// Location of the global minimum in [0, 2π).
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// Location of the global maximum in [0, 2π).
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Domain-window margin 0.1·(v_max − v_min).
    pub fn delta(&self) -> f64 {
        0.1 * (self.v_max - self.v_min)
    }

    /// x_max shifted into (x_min, x_min + 2π).
    pub(crate) fn x_max_right(&self) -> f64 {
        if self.x_max > self.x_min {
            self.x_max
        } else {
            self.x_max + TAU
        }
    }

    fn derivative_sum(&self, x: f64, order: u32) -> f64 {
        self.coeffs
            .iter()
            .map(|(&k, &c)| {
                let kf = k as f64;
                let factor = Complex64::new(0.0, kf).powu(order);
                (factor * c * Complex64::from_polar(1.0, kf * x)).re
            })
            .sum()
    }

    pub fn value(&self, x: f64) -> f64 {
        self.derivative_sum(x, 0)
    }

    pub fn d1(&self, x: f64) -> f64 {
        self.derivative_sum(x, 1)
    }

    pub fn d2(&self, x: f64) -> f64 {
        self.derivative_sum(x, 2)
    }

    /// v sampled at x_j = jΔx, Δx = 2π/n.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        (0..n).map(|j| self.value(TAU * j as f64 / n as f64)).collect()
    }

    fn locate_extrema(&mut self) {
        let deg = self.degree();
        if deg == 0 {
            let c = self.value(0.0);
            self.v_min = c;
            self.v_max = c;
            return;
        }
        let n = SCAN_PER_DEGREE * deg as usize;
        let xs: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
        let vs: Vec<f64> = xs.iter().map(|&x| self.value(x)).collect();
        let step = TAU / n as f64;
        let (mut minima, mut maxima) = (0usize, 0usize);
        for j in 0..n {
            let (l, r) = (vs[(j + n - 1) % n], vs[(j + 1) % n]);
            if vs[j] < l && vs[j] <= r {
                minima += 1;
            }
            if vs[j] > l && vs[j] >= r {
                maxima += 1;
            }
        }
        let jmin = (0..n).min_by(|&a, &b| vs[a].total_cmp(&vs[b])).unwrap_or(0);
        let jmax = (0..n).max_by(|&a, &b| vs[a].total_cmp(&vs[b])).unwrap_or(0);
        let (xmin, vmin) = minimize_golden(|x| self.value(x), xs[jmin] - step, xs[jmin] + step, 1e-14);
        let (xmax, nvmax) = minimize_golden(|x| -self.value(x), xs[jmax] - step, xs[jmax] + step, 1e-14);
        let (xmin, xmax) = (self.polish(xmin), self.polish(xmax));
        self.x_min = xmin.rem_euclid(TAU);
        self.x_max = xmax.rem_euclid(TAU);
        self.v_min = self.value(xmin).min(vmin);
        self.v_max = self.value(xmax).max(-nvmax);
        self.minimal_morse = minima == 1 && maxima == 1 && self.d2(self.x_min) > 0.0 && self.d2(self.x_max) < 0.0;
    }

    /// Newton steps on v' = 0 from a golden-section estimate.
    fn polish(&self, mut x: f64) -> f64 {
        for _ in 0..4 {
            let curvature = self.d2(x);
            if curvature == 0.0 {
                break;
            }
            let step = self.d1(x) / curvature;
            if !step.is_finite() || step.abs() > 1e-3 {
                break;
            }
            x -= step;
        }
        x
    }

    /// Harmonic frequency ω₀ = √(2v''(x_min)).
    pub fn omega0(&self) -> f64 {
        (2.0 * self.d2(self.x_min)).sqrt()
    }

    pub(crate) fn require_morse(&self) -> Result<(), Sturm1dError> {
        if self.minimal_morse {
            Ok(())
        } else {
            Err(Sturm1dError::Unsupported(
                "the formula needs a unique nondegenerate minimum and maximum per period".into(),
            ))
        }
    }
}
