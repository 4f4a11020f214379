use crate::{ActionContext, ActionsError, EdgeEnd};
use magspec_classical::EdgeId;
use magspec_numerics::{chebyshev_nodes, find_root, MonotoneCubic, Tolerance};
use rayon::prelude::*;
use std::fmt::Write;
use std::sync::Arc;

/// Interior Chebyshev nodes per edge.
pub const TABLE_NODES: usize = 64;

/// Sampled monotone map g ↔ I₂ along one edge at fixed I₁.
#[derive(Debug, Clone)]
pub struct EdgeActionTable {
    ctx: Arc<ActionContext>,
    edge: EdgeId,
    energy_range: (f64, f64),
    g: Vec<f64>,
    i2: Vec<f64>,
    inverse: MonotoneCubic,
    interpolation_error: Option<f64>,
}

impl EdgeActionTable {
    /// Samples I₂ at the Chebyshev nodes of the edge's energy range plus the
    /// two end limits. The declared interpolation error is the largest
    /// g-deviation of the interpolant at the interval midpoints.
    pub fn build(ctx: Arc<ActionContext>, edge: EdgeId) -> Result<Self, ActionsError> {
        let mut table = Self::build_unchecked(ctx, edge)?;
        let mids: Vec<f64> = table.g.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let errs: Vec<Result<f64, ActionsError>> = mids
            .par_iter()
            .map(|&gm| match table.ctx.action(edge, gm) {
                Ok(a) => Ok((table.inverse.eval(a) - gm).abs()),
                Err(ActionsError::SeparatrixProximity { .. }) => Ok(0.0),
                Err(e) => Err(e),
            })
            .collect();
        let err = errs
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        table.interpolation_error = Some(err);
        Ok(table)
    }

    /// As [`EdgeActionTable::build`] without the midpoint error estimate.
    pub fn build_unchecked(ctx: Arc<ActionContext>, edge: EdgeId) -> Result<Self, ActionsError> {
        let e = ctx
            .graph()
            .edge(edge)
            .ok_or_else(|| ActionsError::Domain(format!("edge {} is absent from the graph", edge.label())))?;
        let (lo, hi) = e.energy_range;
        let inner = chebyshev_nodes(lo, hi, TABLE_NODES);
        let vals: Vec<Result<f64, ActionsError>> = inner.par_iter().map(|&g| ctx.action(edge, g)).collect();
        let vals = vals.into_iter().collect::<Result<Vec<_>, _>>()?;
        let first = ctx.edge_limit(edge, EdgeEnd::Lower)?.value;
        let last = ctx.edge_limit(edge, EdgeEnd::Upper)?.value;
        let mut g = Vec::with_capacity(TABLE_NODES + 2);
        let mut i2 = Vec::with_capacity(TABLE_NODES + 2);
        g.push(lo);
        i2.push(first);
        g.extend(&inner);
        i2.extend(&vals);
        g.push(hi);
        i2.push(last);
        if let Some(k) = (1..i2.len()).find(|&k| !(i2[k] > i2[k - 1])) {
            return Err(ActionsError::Trajectory(format!(
                "I2 not strictly increasing on edge {} between g = {} and g = {}",
                edge.label(),
                g[k - 1],
                g[k]
            )));
        }
        let inverse = MonotoneCubic::new(i2.clone(), g.clone())?;
        Ok(Self {
            ctx,
            edge,
            energy_range: (lo, hi),
            g,
            i2,
            inverse,
            interpolation_error: None,
        })
    }

    pub fn edge(&self) -> EdgeId {
        self.edge
    }

    pub fn i1(&self) -> f64 {
        self.ctx.i1()
    }

    pub fn context(&self) -> &ActionContext {
        &self.ctx
    }

    pub fn energy_range(&self) -> (f64, f64) {
        self.energy_range
    }

    /// I₂ range (lower limit, upper limit).
    pub fn action_range(&self) -> (f64, f64) {
        (self.i2[0], *self.i2.last().expect("non-empty table"))
    }

    /// Sample pairs (g, I₂), endpoints included.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.g.iter().copied().zip(self.i2.iter().copied())
    }

    /// Largest g-error of the bare interpolant at interval midpoints, when
    /// estimated.
    pub fn interpolation_error(&self) -> Option<f64> {
        self.interpolation_error
    }

    /// I₂(g) from the interpolant alone.
    pub fn action_interpolated(&self, g: f64) -> Result<f64, ActionsError> {
        self.inverse
            .invert(g)
            .ok_or_else(|| ActionsError::Domain(format!("g = {g} is outside the range of edge {}", self.edge.label())))
    }

    /// g(I₂) from the interpolant alone.
    pub fn level_interpolated(&self, i2: f64) -> Result<f64, ActionsError> {
        self.check_range(i2)?;
        Ok(self.inverse.eval(i2))
    }

    /// g(I₂), polished by root finding on the exact action inside the
    /// bracketing sample interval.
    pub fn level(&self, i2: f64) -> Result<f64, ActionsError> {
        self.check_range(i2)?;
        let k = match self.i2.iter().position(|&v| v >= i2) {
            Some(0) => return Ok(self.g[0]),
            Some(k) => k,
            None => return Ok(*self.g.last().expect("non-empty table")),
        };
        if self.i2[k] == i2 {
            return Ok(self.g[k]);
        }
        let (ga, gb) = (self.g[k - 1], self.g[k]);
        let (ia, ib) = (self.i2[k - 1], self.i2[k]);
        let f = |g: f64| {
            if g == ga {
                ia - i2
            } else if g == gb {
                ib - i2
            } else {
                match self.ctx.action(self.edge, g) {
                    Ok(a) => a - i2,
                    // Inside the proximity band of a saddle the interpolant
                    // is the best available estimate.
                    Err(_) => self.inverse.invert(g).unwrap_or(f64::NAN) - i2,
                }
            }
        };
        let span = (self.energy_range.1 - self.energy_range.0).abs();
        Ok(find_root(
            f,
            ga,
            gb,
            Tolerance::new(1e-14 * span.max(1e-300), 1e-15, 200)?,
        )?)
    }

    fn check_range(&self, i2: f64) -> Result<(), ActionsError> {
        let (a, b) = self.action_range();
        if !(i2 >= a && i2 <= b) {
            return Err(ActionsError::Domain(format!(
                "I2 = {i2} is outside the range [{a}, {b}] of edge {}",
                self.edge.label()
            )));
        }
        Ok(())
    }

    /// CSV with header `g,I2` and one row per sample.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("g,I2\n");
        for (g, a) in self.samples() {
            let _ = writeln!(s, "{g:.16e},{a:.16e}");
        }
        s
    }
}

/// E = I₁ + ε·g(I₂) on the table's edge.
pub fn energy_from_actions(table: &EdgeActionTable, i1: f64, i2: f64) -> Result<f64, ActionsError> {
    if (i1 - table.i1()).abs() > 1e-12 * (1.0 + i1.abs()) {
        return Err(ActionsError::Domain(format!(
            "table was built at I1 = {}, queried at {i1}",
            table.i1()
        )));
    }
    let g = table.level(i2)?;
    Ok(table.context().energy(g))
}
