use crate::interior::{bloch_equations, residual_on_window};
use crate::{BlochError, CylinderAlgebra, QuasiMomentum};
use magspec_lattice::{FluxRatio, Lattice};
use magspec_numerics::{hermitian_eigen, hermitian_eigenvalues, minimize_golden, HermitianMatrix};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Singular values below this count as null directions. Entries of the
/// system have unit modulus; eigenvalues of AᴴA carry rounding near 1e-15.
const NULL_TOL: f64 = 1e-6;

/// Nullspace of the truncated magneto-Bloch system for a general drift.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralDSolution {
    pub d: (i64, i64),
    pub i2: f64,
    pub window: i64,
    pub dimension: usize,
    /// Smallest singular values, ascending (at most 4).
    pub smallest_singular: Vec<f64>,
    /// Orthonormal null vectors.
    pub null_vectors: Vec<BTreeMap<(u64, i64), Complex64>>,
    /// Largest equation residual over the null vectors.
    pub residual: f64,
}

fn unknowns(flux: FluxRatio, window: i64) -> Vec<(u64, i64)> {
    (0..flux.m())
        .flat_map(|j| (-window..=window).map(move |k| (j, k)))
        .collect()
}

fn normal_matrix(
    alg: &CylinderAlgebra,
    flux: FluxRatio,
    q: QuasiMomentum,
    window: i64,
) -> (HermitianMatrix, Vec<(u64, i64)>) {
    let idx = unknowns(flux, window);
    let pos: BTreeMap<(u64, i64), usize> = idx.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let n = idx.len();
    let mut ata = vec![Complex64::new(0.0, 0.0); n * n];
    for row in bloch_equations(alg, flux, q, window) {
        for &(u, wu) in &row {
            for &(v, wv) in &row {
                ata[pos[&u] * n + pos[&v]] += wu.conj() * wv;
            }
        }
    }
    (HermitianMatrix::from_fn(n, |i, j| ata[i * n + j]), idx)
}

fn check_window(flux: FluxRatio, window: i64) -> Result<(), BlochError> {
    if window < flux.m() as i64 {
        return Err(BlochError::Domain(format!(
            "window {window} must be at least M = {}",
            flux.m()
        )));
    }
    Ok(())
}

/// Solves both magneto-Bloch conditions for coefficients C^j_k of the
/// translated cylinders ψ̃_k on |k| ≤ `window` (free truncation: equations
/// reaching outside the window are dropped). Requires d·f = 1.
pub fn interior_general_d_solve(
    flux: FluxRatio,
    lattice: &Lattice,
    q: QuasiMomentum,
    d: (i64, i64),
    f: (i64, i64),
    i2: f64,
    window: i64,
) -> Result<GeneralDSolution, BlochError> {
    check_window(flux, window)?;
    let alg = CylinderAlgebra::new(*lattice, flux, d, f, i2)
        .ok_or_else(|| BlochError::Domain(format!("d = {d:?} and f = {f:?} must satisfy d·f = 1")))?;
    let (ata, idx) = normal_matrix(&alg, flux, q, window);
    let (vals, vecs) = hermitian_eigen(&ata);
    let sing: Vec<f64> = vals.iter().map(|v| v.max(0.0).sqrt()).collect();
    let dimension = sing.iter().take_while(|&&s| s <= NULL_TOL).count();
    let null_vectors: Vec<BTreeMap<(u64, i64), Complex64>> = vecs[..dimension]
        .iter()
        .map(|v| idx.iter().copied().zip(v.iter().copied()).collect())
        .collect();
    let residual = null_vectors
        .iter()
        .map(|nv| {
            residual_on_window(&alg, flux, q, window, |j, k| {
                nv.get(&(j, k)).copied().unwrap_or_default()
            })
        })
        .fold(0.0, f64::max);
    Ok(GeneralDSolution {
        d,
        i2,
        window,
        dimension,
        smallest_singular: sing.into_iter().take(4).collect(),
        null_vectors,
        residual,
    })
}

/// The I₂ ∈ [0, h) for which the truncated system has a nontrivial
/// nullspace: a scan of the smallest singular value on `samples` points,
/// refined by golden section.
pub fn general_quantized_i2(
    flux: FluxRatio,
    lattice: &Lattice,
    q: QuasiMomentum,
    d: (i64, i64),
    f: (i64, i64),
    window: i64,
    samples: usize,
) -> Result<Vec<f64>, BlochError> {
    check_window(flux, window)?;
    let h = lattice.a22() / flux.value();
    // Smallest eigenvalue of AᴴA: smooth and quadratic near a zero.
    let lowest = |i2: f64| -> f64 {
        let Some(alg) = CylinderAlgebra::new(*lattice, flux, d, f, i2) else {
            return f64::NAN;
        };
        let (ata, _) = normal_matrix(&alg, flux, q, window);
        hermitian_eigenvalues(&ata)[0].max(0.0)
    };
    if CylinderAlgebra::new(*lattice, flux, d, f, 0.0).is_none() {
        return Err(BlochError::Domain(format!(
            "d = {d:?} and f = {f:?} must satisfy d·f = 1"
        )));
    }
    let n = samples.max(8);
    let step = h / n as f64;
    // Periodic grid: index n wraps to 0.
    let vals: Vec<f64> = (0..n).map(|i| lowest(i as f64 * step)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        let (prev, next) = (vals[(i + n - 1) % n], vals[(i + 1) % n]);
        if vals[i] <= prev && vals[i] < next {
            let centre = i as f64 * step;
            let (x, lam) = minimize_golden(lowest, centre - step, centre + step, 1e-12 * h);
            if lam.sqrt() <= NULL_TOL {
                out.push(x.rem_euclid(h));
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * h);
    Ok(out)
}
