//! Reference spectra of −h²d²/dx² + v with Bloch condition
//! Ψ(x + 2π) = e^{2πiq}Ψ(x).
//!
//! The finite-difference discretization on N points is a cyclic tridiagonal
//! Hermitian matrix. Its eigenvalues come from Sturm counts (inertia of an
//! LDLᴴ factorization whose fill is confined to the last column), so each count
//! costs O(N). Band widths far below double-precision resolution of the
//! eigenvalues come from the same discretization's Floquet discriminant.

use std::f64::consts::TAU;

use magspec_numerics::{find_root, hermitian_eigenvalues, symmetric_eigen, Complex64, HermitianMatrix, Tolerance};
use rayon::prelude::*;
use serde::Serialize;

use crate::{Potential1D, Sturm1dError};

/// Smallest grid accepted by the oracle.
pub const MIN_GRID: usize = 64;

/// The discretized operator: diagonal v_j + 2c, off-diagonal −c, and corner
/// coupling −c·e^{∓2πiq}, with c = h²/Δx².
#[derive(Debug, Clone)]
pub struct FdOperator {
    pub potential: Vec<f64>,
    pub c: f64,
    pub q: f64,
    pub dx: f64,
}

impl FdOperator {
    pub fn new(v: &Potential1D, h: f64, q: f64, grid: usize) -> Result<Self, Sturm1dError> {
        if grid < MIN_GRID {
            return Err(Sturm1dError::Domain(format!(
                "grid size {grid} is below the minimum {MIN_GRID}"
            )));
        }
        if !(h > 0.0 && h.is_finite() && q.is_finite()) {
            return Err(Sturm1dError::Domain(format!("need h > 0 and finite q (got {h}, {q})")));
        }
        let dx = TAU / grid as f64;
        Ok(Self {
            potential: v.sample(grid),
            c: h * h / (dx * dx),
            q,
            dx,
        })
    }

    pub fn len(&self) -> usize {
        self.potential.len()
    }

    pub fn is_empty(&self) -> bool {
        self.potential.is_empty()
    }

    /// Entry A[0][N−1].
    fn corner(&self) -> Complex64 {
        -self.c * Complex64::from_polar(1.0, -TAU * self.q)
    }

    /// (Aψ)_j for a grid function ψ obeying the Bloch condition.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        let phase = Complex64::from_polar(1.0, TAU * self.q);
        (0..n)
            .map(|j| {
                let right = if j + 1 == n { psi[0] * phase } else { psi[j + 1] };
                let left = if j == 0 { psi[n - 1] / phase } else { psi[j - 1] };
                -self.c * (right + left) + (self.potential[j] + 2.0 * self.c) * psi[j]
            })
            .collect()
    }

    /// Number of eigenvalues strictly below e.
    pub fn count_below(&self, e: f64) -> usize {
        let n = self.len();
        let c = self.c;
        let a = |j: usize| self.potential[j] + 2.0 * c - e;
        let tiny = f64::EPSILON * c;
        let guard = |d: f64| if d == 0.0 { -tiny } else { d };
        let mut negatives = 0usize;
        let mut d = guard(a(0));
        let mut g = self.corner();
        let mut last = a(n - 1);
        for j in 1..n - 1 {
            if d < 0.0 {
                negatives += 1;
            }
            last -= g.norm_sqr() / d;
            let fill = if j == n - 2 {
                Complex64::new(-c, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            let next_g = fill + c * g / d;
            d = guard(a(j) - c * c / d);
            g = next_g;
        }
        if d < 0.0 {
            negatives += 1;
        }
        last -= g.norm_sqr() / d;
        if guard(last) < 0.0 {
            negatives += 1;
        }
        negatives
    }

    fn gershgorin(&self) -> (f64, f64) {
        let lo = self.potential.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.potential.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 4.0 * self.c;
        (lo - 1e-12 * (1.0 + lo.abs()), hi + 1e-12 * (1.0 + hi.abs()))
    }

    /// Eigenvalue k (0-based, ascending) by bisection on the Sturm count.
    pub fn eigenvalue(&self, k: usize, lower_hint: f64) -> f64 {
        let (glo, ghi) = self.gershgorin();
        let mut lo = lower_hint.max(glo);
        if self.count_below(lo) > k {
            lo = glo;
        }
        let mut hi = ghi;
        while hi - lo > 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + 1e-300 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `levels` lowest eigenvalues.
    pub fn lowest(&self, levels: usize) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::with_capacity(levels);
        let mut hint = f64::NEG_INFINITY;
        for k in 0..levels.min(self.len()) {
            let e = self.eigenvalue(k, hint);
            out.push(e);
            hint = e;
        }
        out
    }

    /// Floquet discriminant Δ(E) = tr M(E) of the one-period transfer matrix,
    /// returned as (Δ/s, Δ'/s, ln s) for a positive scale s.
    pub fn discriminant(&self, e: f64) -> (f64, f64, f64) {
        // State (ψ_{j+1}, ψ_j) for columns of the fundamental matrix.
        let mut p = [[1.0, 0.0], [0.0, 1.0]];
        let mut dp = [[0.0, 0.0], [0.0, 0.0]];
        let mut log_scale = 0.0;
        for &vj in &self.potential {
            let t = 2.0 + (vj - e) / self.c;
            let dt = -1.0 / self.c;
            let np = [[t * p[0][0] - p[1][0], t * p[0][1] - p[1][1]], [p[0][0], p[0][1]]];
            let ndp = [
                [
                    t * dp[0][0] - dp[1][0] + dt * p[0][0],
                    t * dp[0][1] - dp[1][1] + dt * p[0][1],
                ],
                [dp[0][0], dp[0][1]],
            ];
            let s = np.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
            if s > 1e100 {
                log_scale += s.ln();
                p = np.map(|r| r.map(|x| x / s));
                dp = ndp.map(|r| r.map(|x| x / s));
            } else {
                p = np;
                dp = ndp;
            }
        }
        (p[0][0] + p[1][1], dp[0][0] + dp[1][1], log_scale)
    }
}

fn check_levels(levels: usize, grid: usize) -> Result<(), Sturm1dError> {
    if levels == 0 || levels > grid / 4 {
        return Err(Sturm1dError::Domain(format!(
            "levels must be in 1..={} for grid {grid}",
            grid / 4
        )));
    }
    Ok(())
}

/// The `levels` lowest eigenvalues at quasimomentum q, Richardson-extrapolated
/// from grids N and 2N: (4λ_{2N} − λ_N)/3.
pub fn fd_bloch_oracle(v: &Potential1D, h: f64, q: f64, grid: usize, levels: usize) -> Result<Vec<f64>, Sturm1dError> {
    check_levels(levels, grid)?;
    let coarse = FdOperator::new(v, h, q, grid)?.lowest(levels);
    let fine = FdOperator::new(v, h, q, 2 * grid)?.lowest(levels);
    Ok(coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect())
}

/// Plane-wave Galerkin eigenvalues with modes |n| ≤ modes: matrix entries
/// h²(n + q)²δ_{nm} + c_{n−m}. Independent of the grid discretization.
pub fn fourier_bloch_oracle(v: &Potential1D, h: f64, q: f64, modes: usize) -> Result<Vec<f64>, Sturm1dError> {
    if modes == 0 {
        return Err(Sturm1dError::Domain("need at least one Fourier mode".into()));
    }
    let dim = 2 * modes + 1;
    let coeffs = v.coefficients();
    let m = HermitianMatrix::from_fn(dim, |i, j| {
        let (ni, nj) = (i as i64 - modes as i64, j as i64 - modes as i64);
        let mut entry = coeffs.get(&((ni - nj) as i32)).copied().unwrap_or_default();
        if i == j {
            entry += h * h * (ni as f64 + q).powi(2);
        }
        entry
    });
    Ok(hermitian_eigenvalues(&m))
}

/// Real eigenpairs of the undextrapolated grid operator at q = 0 (periodic)
/// or q = 1/2 (antiperiodic). Vectors have unit ℓ² norm.
pub fn fd_real_eigenpairs(
    v: &Potential1D,
    h: f64,
    antiperiodic: bool,
    grid: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), Sturm1dError> {
    let op = FdOperator::new(v, h, if antiperiodic { 0.5 } else { 0.0 }, grid)?;
    let n = grid;
    let mut a = vec![0.0; n * n];
    for j in 0..n {
        a[j * n + j] = op.potential[j] + 2.0 * op.c;
        let k = (j + 1) % n;
        let wrap = if k == 0 && antiperiodic { -1.0 } else { 1.0 };
        a[j * n + k] += -op.c * wrap;
        a[k * n + j] += -op.c * wrap;
    }
    Ok(symmetric_eigen(n, a))
}

/// Width of band ν of the grid operator with the q-ordering of its edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleBandWidth {
    pub nu: usize,
    pub center: f64,
    pub log_width: f64,
    /// The q = 0 edge is the band bottom.
    pub periodic_bottom: bool,
    /// Width from the discriminant slope rather than eigenvalue differences.
    pub from_discriminant: bool,
}

/// Band ν width on grid N. Widths resolvable from E_ν(0), E_ν(1/2) use them
/// directly; narrower ones use 4/|Δ'(E_c)| at the root E_c of Δ.
pub fn fd_band_width(v: &Potential1D, h: f64, nu: usize, grid: usize) -> Result<OracleBandWidth, Sturm1dError> {
    check_levels(nu + 2, grid)?;
    let per = FdOperator::new(v, h, 0.0, grid)?;
    let anti = FdOperator::new(v, h, 0.5, grid)?;
    let e0 = per.lowest(nu + 2);
    let e_half = anti.eigenvalue(nu, f64::NEG_INFINITY);
    let spacing = e0[nu + 1] - e0[nu];
    let gap_below = if nu > 0 { e0[nu] - e0[nu - 1] } else { spacing };
    let direct = (e_half - e0[nu]).abs();
    if direct > 1e-7 * spacing {
        return Ok(OracleBandWidth {
            nu,
            center: 0.5 * (e0[nu] + e_half),
            log_width: direct.ln(),
            periodic_bottom: e0[nu] < e_half,
            from_discriminant: false,
        });
    }
    let (a, b) = (e0[nu] - 0.25 * gap_below, e0[nu] + 0.25 * spacing);
    let center = find_root(|e| per.discriminant(e).0, a, b, Tolerance::uniform(1e-15))?;
    let (_, slope, log_scale) = per.discriminant(center);
    if slope == 0.0 || !slope.is_finite() {
        return Err(Sturm1dError::Domain(format!("flat discriminant at band {nu}")));
    }
    Ok(OracleBandWidth {
        nu,
        center,
        log_width: 4f64.ln() - slope.abs().ln() - log_scale,
        periodic_bottom: slope < 0.0,
        from_discriminant: true,
    })
}

/// Band ν of the oracle sampled over q.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlochBand1D {
    pub index: usize,
    pub e_minus: f64,
    pub e_plus: f64,
    /// (q, E_ν(q)) samples.
    pub dispersion: Vec<(f64, f64)>,
}

/// Oracle bands 0..levels with dispersions on `q_samples` evenly spaced
/// points of [0, 1]. Diagonalizations run in parallel over q.
pub fn oracle_bands(
    v: &Potential1D,
    h: f64,
    grid: usize,
    levels: usize,
    q_samples: usize,
) -> Result<Vec<BlochBand1D>, Sturm1dError> {
    if q_samples < 2 {
        return Err(Sturm1dError::Domain("need at least two q samples".into()));
    }
    let qs: Vec<f64> = (0..q_samples).map(|i| i as f64 / (q_samples - 1) as f64).collect();
    let spectra: Vec<Vec<f64>> = qs
        .par_iter()
        .map(|&q| fd_bloch_oracle(v, h, q, grid, levels))
        .collect::<Result<_, _>>()?;
    Ok((0..levels)
        .map(|nu| {
            let dispersion: Vec<(f64, f64)> = qs.iter().zip(&spectra).map(|(&q, s)| (q, s[nu])).collect();
            let e_minus = dispersion.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let e_plus = dispersion.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
            BlochBand1D {
                index: nu,
                e_minus,
                e_plus,
                dispersion,
            }
        })
        .collect())
}
