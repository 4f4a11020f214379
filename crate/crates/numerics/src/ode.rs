//! Adaptive Dormand–Prince 5(4) integration of autonomous systems.

use crate::{NumericsError, Tolerance};

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One accepted point of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSample {
    pub t: f64,
    pub y: Vec<f64>,
}

/// Accepted samples of an integration run, starting at the initial state.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub samples: Vec<OdeSample>,
}

impl Trajectory {
    pub fn last(&self) -> &OdeSample {
        self.samples.last().expect("trajectory has the initial sample")
    }
}

/// Dormand–Prince stepper for `y' = f(y)` with mixed abs/rel error control.
pub struct Dopri5<F> {
    rhs: F,
    tol: Tolerance,
    h_min: f64,
}

impl<F: FnMut(&[f64], &mut [f64])> Dopri5<F> {
    pub fn new(rhs: F, tol: Tolerance) -> Self {
        Self { rhs, tol, h_min: 1e-14 }
    }

    /// Fixed step of size `h` from `y`; returns the fifth-order state and the
    /// scaled error norm of the embedded estimate.
    pub fn step(&mut self, y: &[f64], h: f64) -> (Vec<f64>, f64) {
        let n = y.len();
        let mut k = [(); 7].map(|_| vec![0.0; n]);
        let mut tmp = vec![0.0; n];
        for s in 0..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += h * A[s][j] * kj[i];
                }
                tmp[i] = acc;
            }
            (self.rhs)(&tmp, &mut k[s]);
        }
        let mut y5 = vec![0.0; n];
        let mut err: f64 = 0.0;
        for i in 0..n {
            let mut s5 = 0.0;
            let mut s4 = 0.0;
            for s in 0..7 {
                s5 += B5[s] * k[s][i];
                s4 += B4[s] * k[s][i];
            }
            y5[i] = y[i] + h * s5;
            let scale = self.tol.abs_tol + self.tol.rel_tol * y[i].abs().max(y5[i].abs());
            err = err.max((h * (s5 - s4)).abs() / scale);
        }
        (y5, err)
    }

    /// Takes one accepted adaptive step of at most `h` from `y` at time `t`;
    /// returns the new state, the step used and the suggested next step.
    pub fn advance(&mut self, t: f64, y: &[f64], h: f64) -> Result<(Vec<f64>, f64, f64), NumericsError> {
        let mut h = h.max(self.h_min);
        loop {
            let (y_new, err) = self.step(y, h);
            if err <= 1.0 && y_new.iter().all(|v| v.is_finite()) {
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                return Ok((y_new, h, h * fac));
            }
            let fac = if err.is_finite() {
                (0.9 * err.powf(-0.25)).clamp(0.1, 0.5)
            } else {
                0.1
            };
            h *= fac;
            if h < self.h_min {
                return Err(NumericsError::StepUnderflow { t, h });
            }
        }
    }

    /// Integrates from `(0, y0)` until `t_end` or until `stop(prev, cur)`
    /// returns true for an accepted step. `h0` is the initial step.
    pub fn run<S>(&mut self, y0: &[f64], t_end: f64, h0: f64, mut stop: S) -> Result<Trajectory, NumericsError>
    where
        S: FnMut(&OdeSample, &OdeSample) -> bool,
    {
        let mut traj = Trajectory {
            samples: vec![OdeSample { t: 0.0, y: y0.to_vec() }],
        };
        let mut t = 0.0;
        let mut y = y0.to_vec();
        let mut h = h0.min(t_end);
        let max_steps = self.tol.max_iter.max(1) * 500;
        while t < t_end {
            if traj.samples.len() > max_steps {
                return Err(NumericsError::Convergence {
                    iterations: max_steps,
                    estimate: t,
                    error: t_end - t,
                });
            }
            let (y_new, used, next) = self.advance(t, &y, h.min(t_end - t))?;
            t += used;
            y = y_new;
            let cur = OdeSample { t, y: y.clone() };
            let halt = stop(traj.last(), &cur);
            traj.samples.push(cur);
            if halt {
                break;
            }
            h = next;
        }
        Ok(traj)
    }
}

/// Integrates `y' = f(y)` from `y0` over `[0, t_end]`, returning all accepted
/// samples.
pub fn integrate_ode<F>(rhs: F, y0: &[f64], t_end: f64, tol: Tolerance) -> Result<Trajectory, NumericsError>
where
    F: FnMut(&[f64], &mut [f64]),
{
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(NumericsError::Domain("t_end must be finite and non-negative".into()));
    }
    let mut solver = Dopri5::new(rhs, tol);
    solver.run(y0, t_end, (t_end * 1e-3).max(1e-6), |_, _| false)
}
