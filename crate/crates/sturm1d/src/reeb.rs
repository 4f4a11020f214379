//! Reeb graph of H = p² + v(x) on the cylinder: the well edge i1 on
//! (v_min, v_max) and the two rotation edges i2 (p > 0), i3 (p < 0) above v_max.

use std::f64::consts::PI;

use magspec_numerics::MonotoneCubic;
use serde::Serialize;

use crate::semiclassics::{action_lower, action_upper};
use crate::{Potential1D, Sturm1dError};

/// Knots per edge for the inverse maps.
const KNOTS: usize = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ReebEdge1D {
    I1,
    I2,
    I3,
}

#[derive(Debug, Clone)]
pub struct Reeb1D {
    v_min: f64,
    v_max: f64,
    top: f64,
    /// I¹ at v_max; None for constant v (no well edge).
    i1_plus: Option<f64>,
    /// I² = I³ at v_max.
    i2_minus: f64,
    lower: Option<MonotoneCubic>,
    upper: MonotoneCubic,
    potential: Potential1D,
}

impl Reeb1D {
    pub fn edges(&self) -> Vec<ReebEdge1D> {
        if self.i1_plus.is_some() {
            vec![ReebEdge1D::I1, ReebEdge1D::I2, ReebEdge1D::I3]
        } else {
            vec![ReebEdge1D::I2, ReebEdge1D::I3]
        }
    }

    pub fn v_min(&self) -> f64 {
        self.v_min
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    /// Upper end of the tabulated rotation edges.
    pub fn top(&self) -> f64 {
        self.top
    }

    pub fn i1_plus(&self) -> Option<f64> {
        self.i1_plus
    }

    pub fn i2_minus(&self) -> f64 {
        self.i2_minus
    }

    /// I^{1+} − 2I^{2−}.
    pub fn kirchhoff_residual(&self) -> Option<f64> {
        self.i1_plus.map(|i| i - 2.0 * self.i2_minus)
    }

    /// Action on an edge at level H.
    pub fn action(&self, edge: ReebEdge1D, energy: f64) -> Result<f64, Sturm1dError> {
        match edge {
            ReebEdge1D::I1 if self.i1_plus.is_some() => action_lower(&self.potential, energy),
            ReebEdge1D::I1 => Err(Sturm1dError::Domain("constant potential has no i1 edge".into())),
            ReebEdge1D::I2 | ReebEdge1D::I3 => action_upper(&self.potential, energy),
        }
    }

    /// Inverse map 𝓗 on an edge by monotone interpolation of the tabulated
    /// actions. None outside the tabulated range.
    pub fn energy(&self, edge: ReebEdge1D, action: f64) -> Option<f64> {
        match edge {
            ReebEdge1D::I1 => self.lower.as_ref()?.invert(action),
            ReebEdge1D::I2 | ReebEdge1D::I3 => self.upper.invert(action),
        }
    }
}

/// Builds the graph, tabulating rotation edges up to
/// v_max + 4(v_max − v_min) + 4.
pub fn reeb_1d(v: &Potential1D) -> Result<Reeb1D, Sturm1dError> {
    if !v.is_constant() {
        v.require_morse()?;
    }
    let (lo, hi) = (v.v_min(), v.v_max());
    let top = hi + 4.0 * (hi - lo) + 4.0;
    let (i1_plus, lower) = if v.is_constant() {
        (None, None)
    } else {
        let xs: Vec<f64> = (0..=KNOTS)
            .map(|k| lo + (hi - lo) * 0.5 * (1.0 - (PI * k as f64 / KNOTS as f64).cos()))
            .collect();
        let ys = xs.iter().map(|&e| action_lower(v, e)).collect::<Result<Vec<_>, _>>()?;
        (Some(*ys.last().unwrap_or(&0.0)), Some(MonotoneCubic::new(xs, ys)?))
    };
    let xs: Vec<f64> = (0..=KNOTS)
        .map(|k| hi + (top - hi) * (k as f64 / KNOTS as f64).powi(2))
        .collect();
    let ys = xs.iter().map(|&e| action_upper(v, e)).collect::<Result<Vec<_>, _>>()?;
    let i2_minus = ys[0];
    Ok(Reeb1D {
        v_min: lo,
        v_max: hi,
        top,
        i1_plus,
        i2_minus,
        lower,
        upper: MonotoneCubic::new(xs, ys)?,
        potential: v.clone(),
    })
}
