use crate::{BlochError, QuasiMomentum};
use magspec_lattice::{FluxRatio, Lattice};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// One coefficient for JSON export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub j: u64,
    pub l1: i64,
    pub l2: i64,
    pub re: f64,
    pub im: f64,
}

/// C^{s,j}_l for the boundary family s: nonzero only on
/// l₂ + j − s + nM = 0, where it equals
/// exp[−2πi q₁l₁ + 2πi q₂n + 2πi η l₁ s + iη a₂₁ l₂²/2].
pub fn boundary_bloch_coeff(flux: FluxRatio, a21: f64, q: QuasiMomentum, s: u64, j: u64, l: (i64, i64)) -> Complex64 {
    let m = flux.m() as i64;
    let t = s as i64 - j as i64 - l.1;
    if t.rem_euclid(m) != 0 {
        return Complex64::new(0.0, 0.0);
    }
    let n = t / m;
    let eta = flux.value();
    let (l1, l2) = (l.0 as f64, l.1 as f64);
    let phase = -2.0 * PI * q.q1() * l1
        + 2.0 * PI * q.q2() * n as f64
        + 2.0 * PI * eta * l1 * s as f64
        + 0.5 * eta * a21 * l2 * l2;
    Complex64::from_polar(1.0, phase)
}

/// Coefficients of one boundary family on the window |l₁|, |l₂| ≤ `window`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryBlochFamily {
    pub flux: FluxRatio,
    pub q: QuasiMomentum,
    pub s: u64,
    pub window: i64,
    pub coeffs: BTreeMap<(u64, i64, i64), Complex64>,
}

impl BoundaryBlochFamily {
    pub fn get(&self, j: u64, l: (i64, i64)) -> Complex64 {
        self.coeffs.get(&(j, l.0, l.1)).copied().unwrap_or_default()
    }

    /// Nonzero coefficients in (j, l₁, l₂) order.
    pub fn rows(&self) -> Vec<CoefficientRow> {
        self.coeffs
            .iter()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(&(j, l1, l2), c)| CoefficientRow {
                j,
                l1,
                l2,
                re: c.re,
                im: c.im,
            })
            .collect()
    }
}

pub fn boundary_family(
    flux: FluxRatio,
    lattice: &Lattice,
    q: QuasiMomentum,
    s: u64,
    window: i64,
) -> Result<BoundaryBlochFamily, BlochError> {
    if s >= flux.m() || window < 0 {
        return Err(BlochError::Domain(format!(
            "need s < M = {} and window >= 0, got s = {s}, window = {window}",
            flux.m()
        )));
    }
    let mut coeffs = BTreeMap::new();
    for j in 0..flux.m() {
        for l1 in -window..=window {
            for l2 in -window..=window {
                coeffs.insert(
                    (j, l1, l2),
                    boundary_bloch_coeff(flux, lattice.a21(), q, s, j, (l1, l2)),
                );
            }
        }
    }
    Ok(BoundaryBlochFamily {
        flux,
        q,
        s,
        window,
        coeffs,
    })
}

/// Maximum residuals of the magneto-Bloch conditions for one family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryResidualReport {
    /// Recurrence induced by translation by a₁.
    pub translation_a1: f64,
    /// Recurrence induced by translation by a₂, components j ≤ M − 2.
    pub translation_a2: f64,
    /// Recurrence induced by translation by a₂ from j = M − 1 back to 0.
    pub wrap: f64,
    /// Pointwise residual of Ψ^j(x + a₁) and Ψ^j(x + a₂) with a Gaussian
    /// profile, relative to max |Ψ|.
    pub pointwise: f64,
}

impl BoundaryResidualReport {
    pub fn max(&self) -> f64 {
        self.translation_a1
            .max(self.translation_a2)
            .max(self.wrap)
            .max(self.pointwise)
    }
}

/// Checks both magneto-Bloch conditions on the coefficients
/// (|l| ≤ `window` − 1) and pointwise at `points`, using
/// ψ₀(x) = exp(−|x|²/(2σ²)) with σ = 0.3·min(2π, a₂₂).
pub fn verify_boundary_conditions(
    flux: FluxRatio,
    lattice: &Lattice,
    q: QuasiMomentum,
    s: u64,
    window: i64,
    points: &[[f64; 2]],
) -> Result<BoundaryResidualReport, BlochError> {
    let fam = boundary_family(flux, lattice, q, s, window)?;
    let m = flux.m();
    let eta = flux.value();
    let a21 = lattice.a21();
    let lam = |j: u64| Complex64::from_polar(1.0, -2.0 * PI * (q.q1() - j as f64 * eta));
    let (mut ra1, mut ra2, mut rwrap) = (0.0f64, 0.0f64, 0.0f64);
    for j in 0..m {
        for l1 in -window + 1..window {
            for l2 in -window + 1..window {
                let c = fam.get(j, (l1, l2));
                let lhs = fam.get(j, (l1 + 1, l2)) * Complex64::from_polar(1.0, -2.0 * PI * eta * l2 as f64);
                ra1 = ra1.max((lhs - c * lam(j)).norm());
                let up = fam.get(j, (l1, l2 + 1)) * Complex64::from_polar(1.0, -eta * (l2 as f64 + 0.5) * a21);
                if j + 1 < m {
                    ra2 = ra2.max((up - fam.get(j + 1, (l1, l2))).norm());
                } else {
                    let rhs = fam.get(0, (l1, l2)) * Complex64::from_polar(1.0, -2.0 * PI * q.q2());
                    rwrap = rwrap.max((up - rhs).norm());
                }
            }
        }
    }

    let sigma = 0.3 * lattice.a22().min(2.0 * PI);
    let psi = |j: u64, x: [f64; 2]| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(jj, l1, l2), c) in &fam.coeffs {
            if jj != j || c.norm() == 0.0 {
                continue;
            }
            let v = lattice.vector((l1, l2));
            let (dx, dy) = (x[0] - v[0], x[1] - v[1]);
            let g = (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp();
            acc += c * g * Complex64::from_polar(1.0, -eta * l2 as f64 * x[0]);
        }
        acc
    };
    let (a1, a2) = (lattice.a1(), lattice.a2());
    let mut scale = 0.0f64;
    let mut worst = 0.0f64;
    for &x in points {
        for j in 0..m {
            let here = psi(j, x);
            scale = scale.max(here.norm());
            let shifted = psi(j, [x[0] + a1[0], x[1] + a1[1]]);
            worst = worst.max((shifted - here * lam(j)).norm());
            let (next, tau) = if j + 1 < m {
                (j + 1, 0.0)
            } else {
                (0, -2.0 * PI * q.q2())
            };
            let rhs = psi(next, x) * Complex64::from_polar(1.0, -eta * (x[0] + 0.5 * a21) + tau);
            worst = worst.max((psi(j, [x[0] + a2[0], x[1] + a2[1]]) - rhs).norm());
        }
    }
    let pointwise = if scale > 0.0 { worst / scale } else { worst };
    Ok(BoundaryResidualReport {
        translation_a1: ra1,
        translation_a2: ra2,
        wrap: rwrap,
        pointwise,
    })
}

/// det G with G_{s,j} = C^{s,j}_{(0,0)}.
pub fn seed_gram_determinant(flux: FluxRatio, lattice: &Lattice, q: QuasiMomentum) -> Complex64 {
    let m = flux.m() as usize;
    let mut g: Vec<Complex64> = (0..m * m)
        .map(|idx| boundary_bloch_coeff(flux, lattice.a21(), q, (idx / m) as u64, (idx % m) as u64, (0, 0)))
        .collect();
    complex_det(m, &mut g)
}

/// Largest |⟨v_s, v_t⟩| over s ≠ t, v_s the coefficient vector of family s
/// on the window.
pub fn family_gram_offdiagonal(
    flux: FluxRatio,
    lattice: &Lattice,
    q: QuasiMomentum,
    window: i64,
) -> Result<f64, BlochError> {
    let fams: Vec<_> = (0..flux.m())
        .map(|s| boundary_family(flux, lattice, q, s, window))
        .collect::<Result<_, _>>()?;
    let mut worst = 0.0f64;
    for (a, fa) in fams.iter().enumerate() {
        for fb in &fams[a + 1..] {
            let ip: Complex64 = fa.coeffs.iter().map(|(k, c)| c.conj() * fb.coeffs[k]).sum();
            worst = worst.max(ip.norm());
        }
    }
    Ok(worst)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn complex_det(n: usize, a: &mut [Complex64]) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
            .unwrap_or(col);
        if a[piv * n + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            for k in col..n {
                let v = a[col * n + k];
                a[r * n + k] -= f * v;
            }
        }
    }
    det
}
