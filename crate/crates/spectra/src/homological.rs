use crate::SpectraError;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Finitely supported Fourier series Σ c_k e^{i(k₁φ₁ + k₂φ₂)}.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierFunctionOnTorus {
    coeffs: BTreeMap<(i64, i64), Complex64>,
}

impl FourierFunctionOnTorus {
    pub fn new(coeffs: BTreeMap<(i64, i64), Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &BTreeMap<(i64, i64), Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, k: (i64, i64)) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn eval(&self, phi: [f64; 2]) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&(k1, k2), &c)| c * Complex64::from_polar(1.0, k1 as f64 * phi[0] + k2 as f64 * phi[1]))
            .sum()
    }

    /// (∂f/∂φ₁, ∂f/∂φ₂).
    pub fn gradient(&self, phi: [f64; 2]) -> [Complex64; 2] {
        let mut g = [Complex64::default(); 2];
        for (&(k1, k2), &c) in &self.coeffs {
            let e = c * Complex64::from_polar(1.0, k1 as f64 * phi[0] + k2 as f64 * phi[1]) * Complex64::i();
            g[0] += e * k1 as f64;
            g[1] += e * k2 as f64;
        }
        g
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomologicalSolution {
    pub f: FourierFunctionOnTorus,
    pub e: f64,
    /// Σ |g_k| over discarded modes: a sup-norm bound on the residual.
    pub residual_norm: f64,
    /// max |i(k·ω) f_k − g_k| over kept modes.
    pub kept_residual: f64,
    /// N(α) = ⌈C(α)^{1/α}/√ε⌉ with C(α) = max |g_k|·|k|₁^α.
    pub cutoff: u64,
    pub kept: usize,
    pub discarded: usize,
}

/// Solves ω₁∂f/∂φ₁ + ω₂∂f/∂φ₂ = E + G, where G keeps the modes of g in
/// Q = {|k₁|+|k₂| ≤ N(α)} ∪ {|k₂| ≤ 1/√ε}, and E = −g₀₀.
pub fn solve_homological(
    g: &FourierFunctionOnTorus,
    omega1: f64,
    omega2: f64,
    eps: f64,
    alpha: f64,
) -> Result<HomologicalSolution, SpectraError> {
    if omega1 == 0.0 || !omega1.is_finite() || !omega2.is_finite() {
        return Err(SpectraError::Domain(format!(
            "need finite omega1 != 0, got ({omega1}, {omega2})"
        )));
    }
    if !(eps > 0.0 && alpha > 0.0) {
        return Err(SpectraError::Domain(format!(
            "need eps > 0 and alpha > 0, got {eps}, {alpha}"
        )));
    }
    let g00 = g.coeff((0, 0));
    if g00.im != 0.0 {
        return Err(SpectraError::Domain(format!("mean of g must be real, got {g00}")));
    }
    let l1 = |k: (i64, i64)| (k.0.abs() + k.1.abs()) as f64;
    let c = g
        .coeffs
        .iter()
        .filter(|(&k, _)| k != (0, 0))
        .map(|(&k, v)| v.norm() * l1(k).powf(alpha))
        .fold(0.0, f64::max);
    let cutoff = (c.powf(1.0 / alpha) / eps.sqrt()).ceil() as u64;
    let k2_cap = 1.0 / eps.sqrt();
    let scale = omega1.abs().max(omega2.abs());
    let mut f = BTreeMap::new();
    let mut residual_norm = 0.0;
    let mut kept_residual: f64 = 0.0;
    let (mut kept, mut discarded) = (0, 0);
    for (&k, &gk) in &g.coeffs {
        if k == (0, 0) {
            continue;
        }
        let in_q = l1(k) <= cutoff as f64 || (k.1.abs() as f64) <= k2_cap;
        if !in_q {
            residual_norm += gk.norm();
            discarded += 1;
            continue;
        }
        let denom = k.0 as f64 * omega1 + k.1 as f64 * omega2;
        if denom.abs() < 1e-14 * scale {
            return Err(SpectraError::Resonance {
                k1: k.0,
                k2: k.1,
                denominator: denom.abs(),
            });
        }
        let fk = gk / (Complex64::i() * denom);
        kept_residual = kept_residual.max((Complex64::i() * denom * fk - gk).norm());
        f.insert(k, fk);
        kept += 1;
    }
    Ok(HomologicalSolution {
        f: FourierFunctionOnTorus::new(f),
        e: -g00.re,
        residual_norm,
        kept_residual,
        cutoff,
        kept,
        discarded,
    })
}
