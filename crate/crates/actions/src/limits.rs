use crate::{ActionContext, ActionsError};
use magspec_classical::{EdgeId, GraphKind};
use magspec_lattice::FourierPotential;
use magspec_numerics::least_squares;
use rayon::prelude::*;
use serde::Serialize;

/// Which end of an edge's energy range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeEnd {
    Lower,
    Upper,
}

/// Extrapolated end value of I₂ on an edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitFit {
    pub value: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

/// Limits of I₂ at the saddle ends of the four edges, with both Kirchhoff
/// residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparatrixLimits {
    pub i1: f64,
    pub i1_plus: f64,
    pub i2_minus: f64,
    pub i2_plus: f64,
    pub i3_minus: f64,
    pub i3_plus: f64,
    pub i4_minus: f64,
    /// a₁₁·a₂₂/(2π).
    pub cell_action: f64,
    /// I^{1+} − I^{2−} − I^{3−}.
    pub kirchhoff_first: f64,
    /// I^{1+} + (I^{2+} − I^{2−}) + (I^{3+} − I^{3−}) − I^{4−} − a₁₁a₂₂/(2π).
    pub kirchhoff_second: f64,
    /// Largest fit residual among the six limits.
    pub fit_residual: f64,
}

/// Approach levels δ_k = δ₀·2⁻ᵏ with δ₀ = FIT_START·(edge span).
const FIT_LEVELS: usize = 12;
const FIT_START: f64 = 2e-3;

impl ActionContext {
    /// I₂ at one end of `edge`. Extremum ends are exactly 0; saddle ends are
    /// extrapolated by a least-squares fit on {1, δ log δ, δ, δ² log δ, δ²}.
    pub fn edge_limit(&self, edge: EdgeId, end: EdgeEnd) -> Result<LimitFit, ActionsError> {
        let e = self
            .graph()
            .edge(edge)
            .ok_or_else(|| ActionsError::Domain(format!("edge {} is absent from the graph", edge.label())))?;
        match (edge, end) {
            (EdgeId::I1, EdgeEnd::Lower) | (EdgeId::I4, EdgeEnd::Upper) => {
                return Ok(LimitFit {
                    value: 0.0,
                    residual: 0.0,
                })
            }
            _ => {}
        }
        if self.graph().kind == GraphKind::DegenerateTypeII {
            return Err(ActionsError::DegenerateGraph(
                "type-II graph has no separatrix limits".into(),
            ));
        }
        let (lo, hi) = e.energy_range;
        let (gc, side) = match end {
            EdgeEnd::Lower => (lo, 1.0),
            EdgeEnd::Upper => (hi, -1.0),
        };
        let d0 = FIT_START * (hi - lo);
        let us: Vec<f64> = (0..FIT_LEVELS).map(|k| 0.5f64.powi(k as i32)).collect();
        let values: Vec<Result<f64, ActionsError>> =
            us.par_iter().map(|u| self.action(edge, gc + side * d0 * u)).collect();
        let values = values.into_iter().collect::<Result<Vec<_>, _>>()?;
        let rows: Vec<Vec<f64>> = us
            .iter()
            .map(|&u| vec![1.0, u * u.ln(), u, u * u * u.ln(), u * u])
            .collect();
        let c = least_squares(&rows, &values)?;
        let ss: f64 = rows
            .iter()
            .zip(&values)
            .map(|(r, v)| (r.iter().zip(&c).map(|(x, y)| x * y).sum::<f64>() - v).powi(2))
            .sum();
        Ok(LimitFit {
            value: c[0],
            residual: (ss / FIT_LEVELS as f64).sqrt(),
        })
    }

    pub fn separatrix_limits(&self) -> Result<SeparatrixLimits, ActionsError> {
        if self.graph().kind != GraphKind::Generic {
            return Err(ActionsError::DegenerateGraph(format!(
                "separatrix limits need a generic graph, found {:?} at I1 = {}",
                self.graph().kind,
                self.i1()
            )));
        }
        let wanted = [
            (EdgeId::I1, EdgeEnd::Upper),
            (EdgeId::I2, EdgeEnd::Lower),
            (EdgeId::I2, EdgeEnd::Upper),
            (EdgeId::I3, EdgeEnd::Lower),
            (EdgeId::I3, EdgeEnd::Upper),
            (EdgeId::I4, EdgeEnd::Lower),
        ];
        let fits: Vec<Result<LimitFit, ActionsError>> =
            wanted.par_iter().map(|&(e, end)| self.edge_limit(e, end)).collect();
        let fits = fits.into_iter().collect::<Result<Vec<_>, _>>()?;
        let v: Vec<f64> = fits.iter().map(|f| f.value).collect();
        let cell = self.cell_action();
        Ok(SeparatrixLimits {
            i1: self.i1(),
            i1_plus: v[0],
            i2_minus: v[1],
            i2_plus: v[2],
            i3_minus: v[3],
            i3_plus: v[4],
            i4_minus: v[5],
            cell_action: cell,
            kirchhoff_first: v[0] - v[1] - v[3],
            kirchhoff_second: v[0] + (v[2] - v[1]) + (v[4] - v[3]) - v[5] - cell,
            fit_residual: fits.iter().map(|f| f.residual).fold(0.0, f64::max),
        })
    }
}

pub fn separatrix_limits(p: &FourierPotential, eps: f64, i1: f64) -> Result<SeparatrixLimits, ActionsError> {
    ActionContext::new(p, eps, i1)?.separatrix_limits()
}
