//! Chebyshev sampling nodes and shape-preserving cubic interpolation.

use crate::NumericsError;

/// First-kind Chebyshev nodes of order `n` mapped to `[a, b]`, ascending.
pub fn chebyshev_nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (0..n)
        .rev()
        .map(|k| {
            let t = std::f64::consts::PI * (2 * k + 1) as f64 / (2 * n) as f64;
            mid + half * t.cos()
        })
        .collect()
}

/// Piecewise cubic Hermite interpolant with Fritsch–Carlson slopes.
///
/// Monotone data produce a monotone interpolant, which makes the inverse map
/// well defined on each monotone stretch.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// `xs` must be strictly increasing with at least two points.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, NumericsError> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(NumericsError::Domain("need at least two matching samples".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(NumericsError::Domain("abscissae must be strictly increasing".into()));
        }
        if ys.iter().chain(&xs).any(|v| !v.is_finite()) {
            return Err(NumericsError::Domain("samples must be finite".into()));
        }
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes[0] = delta[0];
            slopes[1] = delta[0];
        } else {
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    slopes[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            slopes[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            slopes[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(Self { xs, ys, slopes })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ys)
    }

    /// Evaluates the interpolant; outside the domain the end cubic is
    /// extended.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let i = match self.xs.partition_point(|&t| t <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }

    /// Solves `eval(x) = y` on the knot interval containing `y`, for monotone
    /// data. Returns `None` when `y` is outside the sampled range.
    pub fn invert(&self, y: f64) -> Option<f64> {
        let n = self.xs.len();
        for i in 0..n - 1 {
            let (lo, hi) = if self.ys[i] <= self.ys[i + 1] {
                (self.ys[i], self.ys[i + 1])
            } else {
                (self.ys[i + 1], self.ys[i])
            };
            if y >= lo && y <= hi {
                let f = |x: f64| self.eval(x) - y;
                let tol = crate::Tolerance::uniform(1e-15);
                return crate::find_root(f, self.xs[i], self.xs[i + 1], tol).ok();
            }
        }
        None
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_interior_and_sorted() {
        let x = chebyshev_nodes(-1.0, 3.0, 9);
        assert!(x.windows(2).all(|w| w[1] > w[0]));
        assert!(x[0] > -1.0 && x[8] < 3.0);
        assert!((x[4] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reproduces_knots_and_inverts() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x * x + x).collect();
        let p = MonotoneCubic::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((p.eval(*x) - y).abs() < 1e-14);
        }
        let x = p.invert(0.7).unwrap();
        assert!((p.eval(x) - 0.7).abs() < 1e-13);
        assert!(p.invert(100.0).is_none());
    }
}
