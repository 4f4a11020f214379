//! Dense symmetric and Hermitian eigensolvers.
//!
//! Householder reduction to tridiagonal form followed by the implicit QL
//! iteration. Hermitian eigenvalues use a complex Householder reduction;
//! Hermitian eigenvectors go through the real symmetric embedding
//! [[A, −B], [B, A]] of H = A + iB, whose spectrum is that of H with every
//! eigenvalue doubled.

use crate::NumericsError;
use num_complex::Complex64;

/// Dense complex square matrix validated to be Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Validates `entries[i][j] = conj(entries[j][i])` to within 1e-14 of the
    /// largest entry magnitude.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, NumericsError> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(NumericsError::Domain(format!(
                "expected {dim}x{dim} entries, got {}",
                entries.len()
            )));
        }
        let scale = entries
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        for i in 0..dim {
            for j in i..dim {
                let dev = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                if dev > 1e-14 * scale {
                    return Err(NumericsError::NotHermitian { i, j, deviation: dev });
                }
            }
        }
        Ok(Self { dim, entries })
    }

    /// Builds the matrix from its upper triangle (including the diagonal,
    /// whose imaginary part is discarded).
    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(dim: usize, mut f: F) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(f(i, i).re, 0.0);
            for j in i + 1..dim {
                let z = f(i, j);
                entries[i * dim + j] = z;
                entries[j * dim + i] = z.conj();
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    /// Max-entry norm used as the scale for accuracy statements.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest |m[i][j] − conj(m[j][i])|.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    fn embedding(&self) -> Vec<f64> {
        let n = self.dim;
        let m = 2 * n;
        let mut a = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = self.get(i, j);
                a[i * m + j] = z.re;
                a[(i + n) * m + (j + n)] = z.re;
                a[i * m + (j + n)] = -z.im;
                a[(i + n) * m + j] = z.im;
            }
        }
        a
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Vec<f64> {
    let n = m.dim;
    if m.entries.iter().all(|z| z.im == 0.0) {
        let a: Vec<f64> = m.entries.iter().map(|z| z.re).collect();
        return symmetric_eigenvalues(n, a);
    }
    let (mut d, mut e) = hermitian_tridiagonal(m);
    tql2(n, &mut [], &mut d, &mut e, false);
    d
}

/// Unitary Householder reduction of a Hermitian matrix to a real symmetric
/// tridiagonal one: returns the diagonal and, in `e[1..]`, the moduli of the
/// subdiagonal (a diagonal unitary similarity makes them real).
fn hermitian_tridiagonal(m: &HermitianMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim;
    let mut a = m.entries.clone();
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        let tail = (k + 2..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>();
        if tail == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * norm;
        for i in 0..n {
            v[i] = if i <= k { Complex64::new(0.0, 0.0) } else { a[i * n + k] };
        }
        v[k + 1] -= alpha;
        let vn = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        for x in v[k + 1..].iter_mut() {
            *x /= vn;
        }
        // A ← A − 2vqᴴ − 2qvᴴ with p = Av, q = p − (vᴴp)v.
        for i in k..n {
            p[i] = (k + 1..n).map(|j| a[i * n + j] * v[j]).sum();
        }
        let vp: Complex64 = (k + 1..n).map(|i| v[i].conj() * p[i]).sum();
        for i in k..n {
            p[i] -= vp.re * v[i];
        }
        for i in k..n {
            for j in k..n {
                let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                a[i * n + j] -= 2.0 * upd;
            }
        }
    }
    let d = (0..n).map(|i| a[i * n + i].re).collect();
    let mut e = vec![0.0; n];
    for i in 1..n {
        e[i] = a[i * n + i - 1].norm();
    }
    (d, e)
}

/// Eigenpairs of a Hermitian matrix: ascending eigenvalues and, for each, a
/// unit eigenvector. Within (near-)degenerate clusters the vectors are
/// orthonormalized.
pub fn hermitian_eigen(m: &HermitianMatrix) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let n = m.dim;
    if m.entries.iter().all(|z| z.im == 0.0) {
        let a: Vec<f64> = m.entries.iter().map(|z| z.re).collect();
        let (vals, vecs) = symmetric_eigen(n, a);
        let cvecs = vecs
            .into_iter()
            .map(|v| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
            .collect();
        return (vals, cvecs);
    }
    let (vals2, vecs2) = symmetric_eigen(2 * n, m.embedding());
    let scale = vals2.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1e-300);
    let cluster_tol = 1e-9 * scale;
    let mut values = Vec::with_capacity(n);
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < 2 * n {
        let mut end = start + 1;
        while end < 2 * n && vals2[end] - vals2[end - 1] <= cluster_tol {
            end += 1;
        }
        let want = (end - start) / 2;
        let mean = vals2[start..end].iter().sum::<f64>() / (end - start) as f64;
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(want);
        for v in &vecs2[start..end] {
            if basis.len() == want {
                break;
            }
            let mut z: Vec<Complex64> = (0..n).map(|i| Complex64::new(v[i], v[i + n])).collect();
            for b in &basis {
                let proj: Complex64 = b.iter().zip(&z).map(|(bi, zi)| bi.conj() * zi).sum();
                for (zi, bi) in z.iter_mut().zip(b) {
                    *zi -= proj * bi;
                }
            }
            let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.3 {
                for zi in z.iter_mut() {
                    *zi /= norm;
                }
                basis.push(z);
            }
        }
        for b in basis {
            values.push(mean);
            vectors.push(b);
        }
        start = end;
    }
    (values, vectors)
}

/// Eigenvalues of a real symmetric matrix given row-major, ascending.
pub fn symmetric_eigenvalues(n: usize, a: Vec<f64>) -> Vec<f64> {
    let mut z = a;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut z, &mut d, &mut e, false);
    tql2(n, &mut z, &mut d, &mut e, false);
    d
}

/// Eigenpairs of a real symmetric matrix given row-major. Eigenvectors are
/// returned as separate unit vectors, matching the ascending eigenvalues.
pub fn symmetric_eigen(n: usize, a: Vec<f64>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut z = a;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut z, &mut d, &mut e, true);
    tql2(n, &mut z, &mut d, &mut e, true);
    let vecs = (0..n).map(|k| (0..n).map(|i| z[i * n + k]).collect()).collect();
    (d, vecs)
}

/// Householder tridiagonalization (EISPACK tred2 ordering). On exit `d` holds
/// the diagonal, `e[1..]` the subdiagonal and, when `vectors` is set, `z` the
/// accumulated orthogonal transformation.
fn tred2(n: usize, z: &mut [f64], d: &mut [f64], e: &mut [f64], vectors: bool) {
    if n == 0 {
        return;
    }
    for j in 0..n {
        d[j] = z[(n - 1) * n + j];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = z[(i - 1) * n + j];
                z[i * n + j] = 0.0;
                z[j * n + i] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for j in 0..i {
                e[j] = 0.0;
            }
            for j in 0..i {
                f = d[j];
                z[j * n + i] = f;
                g = e[j] + z[j * n + j] * f;
                for k in j + 1..i {
                    g += z[k * n + j] * d[k];
                    e[k] += z[k * n + j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    z[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = z[(i - 1) * n + j];
                z[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }
    // Accumulate transformations.
    for i in 0..n - 1 {
        z[(n - 1) * n + i] = z[i * n + i];
        z[i * n + i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 && vectors {
            for k in 0..=i {
                d[k] = z[k * n + i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += z[k * n + i + 1] * z[k * n + j];
                }
                for k in 0..=i {
                    z[k * n + j] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            z[k * n + i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = z[(n - 1) * n + j];
        z[(n - 1) * n + j] = 0.0;
    }
    z[(n - 1) * n + n - 1] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL iteration on the tridiagonal (d, e), sorting ascending.
fn tql2(n: usize, z: &mut [f64], d: &mut [f64], e: &mut [f64], vectors: bool) {
    if n == 0 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for i in l + 2..n {
                    d[i] -= h;
                }
                f += h;
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if vectors {
                        for k in 0..n {
                            h = z[k * n + i + 1];
                            z[k * n + i + 1] = s * z[k * n + i] + c * h;
                            z[k * n + i] = c * z[k * n + i] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 || iter > 60 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    // Selection sort (keeps eigenvectors aligned).
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for j in i + 1..n {
            if d[j] < p {
                k = j;
                p = d[j];
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            if vectors {
                for j in 0..n {
                    z.swap(j * n + i, j * n + k);
                }
            }
        }
    }
}
