use crate::Lattice;

/// Rational flux η = N/M in lowest terms with M > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FluxRatio {
    n: i64,
    m: u64,
}

impl FluxRatio {
    /// Reduces N/M; returns `None` for M = 0.
    pub fn new(n: i64, m: u64) -> Option<Self> {
        if m == 0 {
            return None;
        }
        let g = gcd(n.unsigned_abs(), m).max(1);
        Some(Self {
            n: n / g as i64,
            m: m / g,
        })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn value(&self) -> f64 {
        self.n as f64 / self.m as f64
    }

    /// Ñ with N·Ñ ≡ 1 (mod M), in [0, M). For M = 1 this is 0.
    pub fn n_inverse_mod_m(&self) -> u64 {
        let m = self.m as i128;
        if m == 1 {
            return 0;
        }
        let (mut r0, mut r1) = ((self.n as i128).rem_euclid(m), m);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0.div_euclid(r1);
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        s0.rem_euclid(m) as u64
    }
}

impl std::fmt::Display for FluxRatio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.n, self.m)
    }
}

/// Flux classification of η = a22/h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Flux {
    Rational(FluxRatio),
    Irrational { eta: f64 },
}

impl Flux {
    pub fn rational(&self) -> Option<FluxRatio> {
        match self {
            Flux::Rational(r) => Some(*r),
            Flux::Irrational { .. } => None,
        }
    }
}

const MAX_DENOMINATOR: u64 = 1_000_000;
const RATIONAL_TOL: f64 = 1e-12;

/// η = a22/h as N/M when within 1e-12 (relative to max(1, |η|)) of a
/// fraction with M ≤ 10⁶, else irrational.
pub fn flux_ratio(lattice: &Lattice, h: f64) -> Flux {
    let eta = lattice.a22() / h;
    match best_rational(eta) {
        Some(r) => Flux::Rational(r),
        None => Flux::Irrational { eta },
    }
}

/// Continued-fraction convergents of x, returning the first within tolerance.
fn best_rational(x: f64) -> Option<FluxRatio> {
    if !x.is_finite() {
        return None;
    }
    let tol = RATIONAL_TOL * x.abs().max(1.0);
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i128;
        let (p2, q2) = (ai * p1 + p0, ai * q1 + q0);
        if q2 as u64 > MAX_DENOMINATOR {
            return None;
        }
        if (x - p2 as f64 / q2 as f64).abs() <= tol {
            return FluxRatio::new(p2 as i64, q2 as u64);
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
