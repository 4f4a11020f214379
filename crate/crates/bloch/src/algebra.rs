use magspec_lattice::{FluxRatio, Lattice};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Magnetic translations acting on the translated cylinder quasimodes
/// ψ̃_k = S_{k·e} ψ̃₀, e = (f₂, −f₁), where ψ̃₀ is quasi-periodic along the
/// drift: W_{−D} ψ̃₀ = e^{2πi I₂/h} ψ̃₀ with D = d·a and the symmetric
/// translation W_L = S_L·e^{(i/h)L₁L₂/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderAlgebra {
    lattice: Lattice,
    eta: f64,
    d: (i64, i64),
    f: (i64, i64),
    i2: f64,
}

impl CylinderAlgebra {
    /// `d·f` must equal 1.
    pub fn new(lattice: Lattice, flux: FluxRatio, d: (i64, i64), f: (i64, i64), i2: f64) -> Option<Self> {
        (d.0 * f.0 + d.1 * f.1 == 1).then_some(Self {
            lattice,
            eta: flux.value(),
            d,
            f,
            i2,
        })
    }

    pub fn h(&self) -> f64 {
        self.lattice.a22() / self.eta
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn drift(&self) -> (i64, i64) {
        self.d
    }

    /// S_m ψ̃_k = phase·ψ̃_{k'}; returns (k', phase).
    pub fn translate(&self, m: (i64, i64), k: i64) -> (i64, Complex64) {
        let (d, f) = (self.d, self.f);
        let mv = self.lattice.vector(m);
        let dv = self.lattice.vector(d);
        let ev = self.lattice.vector((f.1, -f.0));
        // m·a + k·E = α·D + β·E.
        let alpha = m.0 * f.0 + m.1 * f.1;
        let beta = m.0 * d.1 - m.1 * d.0 + k;
        let (a, b) = (alpha as f64, beta as f64);
        let phase =
            (mv[0] * k as f64 * ev[1] - a * b * ev[0] * dv[1] - 0.5 * a * a * dv[0] * dv[1] - 2.0 * PI * a * self.i2)
                / self.h();
        (beta, Complex64::from_polar(1.0, phase))
    }
}
