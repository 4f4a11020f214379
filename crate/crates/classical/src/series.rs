use crate::{find_critical_points, ClassicalError, CriticalKind};
use magspec_lattice::FourierPotential;
use magspec_numerics::{bessel_j0, bessel_j0_zero, find_root, minimize_golden, Tolerance};
use rayon::prelude::*;
use serde::Serialize;

/// Critical cyclotron actions up to a cap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalSeries {
    /// Saddle values collide (type-I degeneration).
    pub type_one: Vec<f64>,
    /// Extrema merge with saddles (type-II degeneration).
    pub type_two: Vec<f64>,
    /// Values present in both series.
    pub merged: Vec<f64>,
    /// Every I₁ is type-I degenerate.
    pub continuum: bool,
}

impl CriticalSeries {
    /// Sorted union of both series.
    pub fn all(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.type_one.iter().chain(&self.type_two).copied().collect();
        v.sort_by(f64::total_cmp);
        dedup_close(&mut v);
        v
    }
}

const MERGE_TOL: f64 = 1e-9;

fn dedup_close(v: &mut Vec<f64>) {
    v.dedup_by(|a, b| (*a - *b).abs() <= MERGE_TOL * (1.0 + b.abs()));
}

/// Critical I₁ values in (0, i1_max]. The cosine example is solved from its
/// Bessel factors; other potentials by a 200-point scan of the critical
/// values with golden-section refinement.
pub fn critical_i1_series(p: &FourierPotential, i1_max: f64) -> Result<CriticalSeries, ClassicalError> {
    if !(i1_max.is_finite() && i1_max > 0.0) {
        return Err(ClassicalError::Domain(format!("I1_max must be positive, got {i1_max}")));
    }
    match p.as_cosine() {
        Some(c) => cosine_series(c.a, c.b, c.beta, i1_max),
        None => general_series(p, i1_max, 200),
    }
}

fn cosine_series(a: f64, b: f64, beta: f64, i1_max: f64) -> Result<CriticalSeries, ClassicalError> {
    let r_max = (2.0 * i1_max).sqrt();
    let mut type_two = Vec::new();
    for (amp, scale) in [(a, 1.0), (b, beta)] {
        if amp == 0.0 {
            continue;
        }
        for k in 1.. {
            let r = bessel_j0_zero(k)? / scale;
            if r > r_max {
                break;
            }
            type_two.push(0.5 * r * r);
        }
    }
    type_two.sort_by(f64::total_cmp);
    dedup_close(&mut type_two);

    let continuum = a == b && beta == 1.0;
    let mut type_one = Vec::new();
    if !continuum {
        let tol = Tolerance::uniform(1e-15);
        for sign in [1.0, -1.0] {
            let f = |r: f64| a * bessel_j0(r).unwrap_or(f64::NAN) - sign * b * bessel_j0(beta * r).unwrap_or(f64::NAN);
            let step = 0.005 / beta.max(1.0);
            let n = (r_max / step).ceil() as usize;
            let mut prev = (0.0, f(0.0));
            for i in 1..=n {
                let r = (i as f64 * step).min(r_max);
                let cur = (r, f(r));
                if cur.1 == 0.0 {
                    type_one.push(0.5 * r * r);
                } else if prev.1 * cur.1 < 0.0 {
                    let root = find_root(f, prev.0, cur.0, tol)?;
                    type_one.push(0.5 * root * root);
                }
                prev = cur;
            }
        }
        type_one.retain(|&v| v > 0.0 && v <= i1_max);
        type_one.sort_by(f64::total_cmp);
        dedup_close(&mut type_one);
    }
    let merged = type_one
        .iter()
        .copied()
        .filter(|x| type_two.iter().any(|y| (x - y).abs() <= 1e-8 * (1.0 + y.abs())))
        .collect();
    Ok(CriticalSeries {
        type_one,
        type_two,
        merged,
        continuum,
    })
}

/// (g₊ − g₋, min |det Hess| / scale²) at I₁; the saddle gap is 0 when the
/// structure is not minimal Morse.
fn indicators(p: &FourierPotential, i1: f64) -> (f64, f64) {
    let av = match p.averaged(i1) {
        Ok(av) => av,
        Err(_) => return (f64::NAN, f64::NAN),
    };
    let set = find_critical_points(&av);
    let hscale: f64 = av
        .modes()
        .iter()
        .map(|m| m.c.norm() * (m.b[0].powi(2) + m.b[1].powi(2)))
        .sum();
    let det = set
        .points
        .iter()
        .map(|q| q.hessian_det.abs())
        .fold(f64::INFINITY, f64::min)
        / (hscale * hscale).max(1e-300);
    let saddles: Vec<f64> = set.of_kind(CriticalKind::Saddle).map(|q| q.value).collect();
    let gap = if saddles.len() == 2 && !set.degenerate {
        (saddles[0] - saddles[1]).abs()
    } else {
        0.0
    };
    (gap, if det.is_finite() { det } else { 0.0 })
}

pub(crate) fn general_series(p: &FourierPotential, i1_max: f64, grid: usize) -> Result<CriticalSeries, ClassicalError> {
    let xs: Vec<f64> = (1..=grid).map(|k| i1_max * k as f64 / grid as f64).collect();
    let ind: Vec<(f64, f64)> = xs.par_iter().map(|&x| indicators(p, x)).collect();
    let vscale = p.coeff_l1().max(1e-300);
    let mut type_one = Vec::new();
    let mut type_two = Vec::new();
    for k in 0..grid {
        let lo = if k == 0 { 0.0 } else { xs[k - 1] };
        let hi = if k + 1 < grid { xs[k + 1] } else { xs[k] };
        let is_min = |sel: &dyn Fn(&(f64, f64)) -> f64| {
            let c = sel(&ind[k]);
            let l = if k == 0 { f64::INFINITY } else { sel(&ind[k - 1]) };
            let r = if k + 1 < grid { sel(&ind[k + 1]) } else { f64::INFINITY };
            c <= l && c <= r
        };
        if is_min(&|v| v.0) {
            let (x, gmin) = minimize_golden(|x| indicators(p, x).0, lo, hi, 1e-12 * i1_max);
            if gmin < 1e-7 * vscale && x > 0.0 {
                type_one.push(x);
            }
        }
        if is_min(&|v| v.1) {
            let (x, dmin) = minimize_golden(|x| indicators(p, x).1, lo, hi, 1e-12 * i1_max);
            if dmin < 1e-6 && x > 0.0 {
                type_two.push(x);
            }
        }
    }
    type_one.sort_by(f64::total_cmp);
    type_two.sort_by(f64::total_cmp);
    dedup_loose(&mut type_one, 1e-6 * i1_max);
    dedup_loose(&mut type_two, 1e-6 * i1_max);
    let merged = type_one
        .iter()
        .copied()
        .filter(|x| type_two.iter().any(|y| (x - y).abs() <= 1e-6 * i1_max))
        .collect();
    let continuum = ind.iter().all(|v| v.0 < 1e-7 * vscale);
    Ok(CriticalSeries {
        type_one,
        type_two,
        merged,
        continuum,
    })
}

fn dedup_loose(v: &mut Vec<f64>, tol: f64) {
    v.dedup_by(|a, b| (*a - *b).abs() <= tol);
}

#[cfg(test)]
mod tests {
    use super::*;
    use magspec_lattice::cosine_example;

    #[test]
    fn scan_finds_first_type_two_root_of_cosine() {
        let p = cosine_example(2.0, 1.0, 1.5).unwrap();
        let s = general_series(&p, 3.0, 60).unwrap();
        let j = bessel_j0_zero(1).unwrap();
        let expect = [0.5 * j * j / 2.25, 0.5 * j * j];
        for e in expect.iter().filter(|&&e| e <= 3.0) {
            assert!(
                s.type_two.iter().any(|x| (x - e).abs() < 1e-6),
                "{e} not in {:?}",
                s.type_two
            );
        }
        let exact = cosine_series(2.0, 1.0, 1.5, 3.0).unwrap();
        for e in &exact.type_one {
            assert!(
                s.type_one.iter().any(|x| (x - e).abs() < 1e-6),
                "{e} not in {:?}",
                s.type_one
            );
        }
    }
}
