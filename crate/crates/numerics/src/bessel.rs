//! Bessel function of the first kind, order zero.
//!
//! Three branches: the Taylor series near the origin, Miller's backward
//! recurrence in the oscillatory middle range, and the Hankel asymptotic
//! expansion (truncated at its smallest term) for large arguments.

use crate::{find_root, NumericsError, Tolerance};

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 100.0;

/// J₀(x), accurate to roughly 1e-14 absolute on the whole real line.
pub fn bessel_j0(x: f64) -> Result<f64, NumericsError> {
    if !x.is_finite() {
        return Err(NumericsError::Domain(format!("bessel_j0 of non-finite {x}")));
    }
    let ax = x.abs();
    Ok(if ax <= SERIES_LIMIT {
        bessel_j0_series(ax)
    } else if ax <= ASYMPTOTIC_LIMIT {
        j0_miller(ax)
    } else {
        bessel_j0_asymptotic(ax)
    })
}

/// Power series Σ (−x²/4)^k / (k!)², summed until terms drop below 1e-17.
pub fn bessel_j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term: f64 = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term.abs() >= 1e-17 || k < 3.0 {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
        if k > 400.0 {
            break;
        }
    }
    sum
}

/// Hankel expansion √(2/(πx))·(P cos χ − Q sin χ), χ = x − π/4, with P and Q
/// summed up to (excluding) their smallest term.
pub fn bessel_j0_asymptotic(x: f64) -> f64 {
    let x = x.abs();
    let eight_x = 8.0 * x;
    // a_k = Π_{j=1..k} (−(2j−1)²) / (k! (8x)^k) for order zero.
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 0..200usize {
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        let odd = (2 * k + 1) as f64;
        term *= odd * odd / (((k + 1) as f64) * eight_x);
        if term.abs() < 1e-18 {
            break;
        }
    }
    let chi = x - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() + q * chi.sin())
}

/// Miller's backward recurrence normalized by J₀ + 2ΣJ₂ₖ = 1.
fn j0_miller(x: f64) -> f64 {
    let mut m = (x + 12.0 * x.cbrt() + 40.0) as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let mut j_next = 0.0; // J_{k+1}
    let mut j_cur = 1e-300; // J_k
    let mut norm = 0.0;
    let mut j0 = 0.0;
    for k in (1..=m).rev() {
        let j_prev = 2.0 * k as f64 / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * j_cur;
        }
        if k - 1 == 0 {
            j0 = j_cur;
        }
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            norm *= 1e-250;
            j0 *= 1e-250;
        }
    }
    j0 / (norm + j0)
}

/// The k-th positive zero of J₀ (k ≥ 1), bracketed by McMahon's estimate.
pub fn bessel_j0_zero(k: usize) -> Result<f64, NumericsError> {
    if k == 0 {
        return Err(NumericsError::Domain("zero index starts at 1".into()));
    }
    let guess = (k as f64 - 0.25) * std::f64::consts::PI;
    let f = |x: f64| bessel_j0(x).unwrap_or(f64::NAN);
    find_root(f, guess - 0.4, guess + 0.4, Tolerance::uniform(1e-15))
}
