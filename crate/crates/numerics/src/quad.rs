//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::{NumericsError, Tolerance};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = hl * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Panel {
        a,
        b,
        value: k * hl,
        error: ((k - g) * hl).abs(),
    }
}

/// ∫ₐᵇ f(x) dx by bisecting the panel with the largest error estimate until
/// the summed estimate meets `tol`. `tol.max_iter` caps the panel count.
pub fn adaptive_quad<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64, NumericsError> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(NumericsError::Domain(format!("non-finite limits [{a}, {b}]")));
    }
    if a > b {
        return Err(NumericsError::Domain(format!("reversed limits [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut panels = vec![kronrod(&mut f, a, b)];
    let mut value = panels[0].value;
    let mut error = panels[0].error;
    let mut iterations = 1;
    while error > tol.target(value) {
        if !value.is_finite() {
            return Err(NumericsError::Domain("integrand produced a non-finite value".into()));
        }
        if iterations >= tol.max_iter {
            return Err(NumericsError::Convergence {
                iterations,
                estimate: value,
                error,
            });
        }
        let (worst, _) = panels.iter().enumerate().fold(
            (0, -1.0),
            |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc },
        );
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // Panel cannot be split further in floating point.
            return Err(NumericsError::Convergence {
                iterations,
                estimate: value,
                error,
            });
        }
        let left = kronrod(&mut f, p.a, mid);
        let right = kronrod(&mut f, mid, p.b);
        panels.push(left);
        panels.push(right);
        // Re-sum instead of updating incrementally to avoid drift.
        value = panels.iter().map(|q| q.value).sum();
        error = panels.iter().map(|q| q.error).sum();
        iterations += 1;
    }
    Ok(value)
}

/// Integral of a smooth periodic function over one full period by the
/// composite trapezoid rule, doubling the node count until two successive
/// estimates agree. Exponentially convergent for analytic integrands.
pub fn adaptive_quad_periodic<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    period: f64,
    tol: Tolerance,
) -> Result<f64, NumericsError> {
    let mut n = 16usize;
    let mut sum: f64 = (0..n).map(|i| f(a + period * i as f64 / n as f64)).sum();
    let mut prev = sum * period / n as f64;
    for _ in 0..tol.max_iter.min(24) {
        let mut extra = 0.0;
        for i in 0..n {
            extra += f(a + period * (i as f64 + 0.5) / n as f64);
        }
        sum += extra;
        n *= 2;
        let cur = sum * period / n as f64;
        if (cur - prev).abs() <= tol.target(cur) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(NumericsError::Convergence {
        iterations: n,
        estimate: prev,
        error: f64::NAN,
    })
}
