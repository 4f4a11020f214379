use crate::DriftSystem;
use magspec_lattice::AveragedPotential;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    Minimum,
    Maximum,
    Saddle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    /// Location in the fundamental cell.
    pub y: [f64; 2],
    pub kind: CriticalKind,
    /// v̄ at the point.
    pub value: f64,
    pub hessian_det: f64,
    /// |det Hessian| below the degeneracy threshold.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPointSet {
    /// Sorted by value, then kind.
    pub points: Vec<CriticalPoint>,
    /// Some point failed the degeneracy threshold.
    pub degenerate: bool,
    /// The search did not certify completeness (no converged seed, or the
    /// Euler characteristic check failed).
    pub incomplete: bool,
}

impl CriticalPointSet {
    pub fn count(&self, kind: CriticalKind) -> usize {
        self.points.iter().filter(|p| p.kind == kind).count()
    }

    pub fn of_kind(&self, kind: CriticalKind) -> impl Iterator<Item = &CriticalPoint> + '_ {
        self.points.iter().filter(move |p| p.kind == kind)
    }

    /// #min + #max − #saddle; zero on the torus for Morse functions.
    pub fn euler_characteristic(&self) -> i64 {
        self.count(CriticalKind::Minimum) as i64 + self.count(CriticalKind::Maximum) as i64
            - self.count(CriticalKind::Saddle) as i64
    }
}

const SEEDS: usize = 32;
const DEGENERACY: f64 = 1e-8;

/// All critical points of v̄(I₁, ·) in one cell, by damped Newton iteration
/// on ∇v̄ from a 32×32 seed grid, deduplicated modulo the lattice.
pub fn find_critical_points(av: &AveragedPotential) -> CriticalPointSet {
    let sys = DriftSystem::from_averaged(av.clone(), 1.0);
    let gscale = sys.grad_scale();
    let hscale = sys.hess_scale();
    let lattice = *av.lattice();
    let diam = sys.cell_diameter();
    if gscale == 0.0 {
        return CriticalPointSet {
            points: Vec::new(),
            degenerate: true,
            incomplete: false,
        };
    }
    let mut found: Vec<[f64; 2]> = Vec::new();
    for i in 0..SEEDS {
        for j in 0..SEEDS {
            let seed = lattice.point((i as f64 + 0.5) / SEEDS as f64, (j as f64 + 0.5) / SEEDS as f64);
            if let Some(y) = newton(av, seed, gscale, hscale) {
                let (r, _) = lattice.reduce(y);
                if !found.iter().any(|q| periodic_distance(&lattice, *q, r) < 1e-7 * diam) {
                    found.push(r);
                }
            }
        }
    }
    let mut points: Vec<CriticalPoint> = found
        .into_iter()
        .map(|y| {
            let (value, _, hs) = av.jet(y);
            let det = hs[0][0] * hs[1][1] - hs[0][1] * hs[1][0];
            let tr = hs[0][0] + hs[1][1];
            let kind = if det < 0.0 {
                CriticalKind::Saddle
            } else if tr > 0.0 {
                CriticalKind::Minimum
            } else {
                CriticalKind::Maximum
            };
            CriticalPoint {
                y,
                kind,
                value,
                hessian_det: det,
                degenerate: det.abs() < DEGENERACY * hscale * hscale,
            }
        })
        .collect();
    points.sort_by(|a, b| a.value.total_cmp(&b.value).then((a.kind as u8).cmp(&(b.kind as u8))));
    let degenerate = points.iter().any(|p| p.degenerate);
    let mut set = CriticalPointSet {
        incomplete: points.is_empty(),
        points,
        degenerate,
    };
    if !set.degenerate && set.euler_characteristic() != 0 {
        set.incomplete = true;
    }
    set
}

fn newton(av: &AveragedPotential, mut y: [f64; 2], gscale: f64, hscale: f64) -> Option<[f64; 2]> {
    let mut lambda = 1e-6 * hscale;
    let mut gnorm = {
        let g = av.grad(y);
        g[0].hypot(g[1])
    };
    for _ in 0..100 {
        if gnorm <= 1e-13 * gscale {
            return Some(y);
        }
        let (_, g, hs) = av.jet(y);
        // Levenberg–Marquardt step on the gradient residual: (HᵀH + λ)Δ = −Hᵀg.
        let a = [
            [
                hs[0][0] * hs[0][0] + hs[1][0] * hs[1][0] + lambda,
                hs[0][0] * hs[0][1] + hs[1][0] * hs[1][1],
            ],
            [
                hs[0][1] * hs[0][0] + hs[1][1] * hs[1][0],
                hs[0][1] * hs[0][1] + hs[1][1] * hs[1][1] + lambda,
            ],
        ];
        let r = [
            -(hs[0][0] * g[0] + hs[1][0] * g[1]),
            -(hs[0][1] * g[0] + hs[1][1] * g[1]),
        ];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dy = [
            (r[0] * a[1][1] - r[1] * a[0][1]) / det,
            (a[0][0] * r[1] - a[1][0] * r[0]) / det,
        ];
        let trial = [y[0] + dy[0], y[1] + dy[1]];
        let gt = av.grad(trial);
        let tn = gt[0].hypot(gt[1]);
        if tn < gnorm {
            y = trial;
            gnorm = tn;
            lambda = (lambda * 0.1).max(1e-300);
        } else {
            lambda *= 10.0;
            if lambda > 1e12 * hscale.max(1e-300) {
                return None;
            }
        }
    }
    (gnorm <= 1e-11 * gscale).then_some(y)
}

/// Distance between two points on the torus.
pub(crate) fn periodic_distance(l: &magspec_lattice::Lattice, a: [f64; 2], b: [f64; 2]) -> f64 {
    let (s, t) = l.coords([a[0] - b[0], a[1] - b[1]]);
    let mut best = f64::INFINITY;
    for ds in -1..=1 {
        for dt in -1..=1 {
            let p = l.point(s - s.round() + ds as f64, t - t.round() + dt as f64);
            best = best.min(p[0].hypot(p[1]));
        }
    }
    best
}
