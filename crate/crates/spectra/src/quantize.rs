use crate::{landau_level, SpectraError};
use magspec_actions::{energy_from_actions, ActionContext, EdgeActionTable};
use magspec_classical::{EdgeId, Regime, RegimeKind};
use magspec_lattice::FourierPotential;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// Leading-order accuracy of every quantized energy.
pub const ACCURACY_TAG: &str = "O(h^2+eps^2)";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionValue {
    Point { value: f64 },
    Interval { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantizedState {
    pub regime: String,
    pub edge: EdgeId,
    pub mu: u32,
    pub nu: Option<i64>,
    pub i1: f64,
    pub i2: ActionValue,
    pub e_low: f64,
    pub e_high: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Points,
    Intervals,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSeries {
    pub regime: String,
    pub edge: EdgeId,
    pub kind: SeriesKind,
    pub accuracy: &'static str,
    pub states: Vec<QuantizedState>,
}

/// Action table of a regime's edge at I₁ = I₁^μ.
#[derive(Debug, Clone)]
pub struct RegimeTable {
    pub mu: u32,
    pub table: EdgeActionTable,
}

/// Landau levels I₁^μ strictly inside the regime's trimmed I₁ interval
/// (the left end is included when it is 0).
fn levels_in(regime: &Regime, h: f64) -> Result<Vec<(u32, f64)>, SpectraError> {
    let (lo, hi) = regime.i1_interval;
    let mut out = Vec::new();
    let mut mu = 0u32;
    loop {
        let i1 = landau_level(mu, h)?;
        if i1 >= hi {
            break;
        }
        if i1 > lo || (lo == 0.0 && i1 >= lo) {
            out.push((mu, i1));
        }
        mu += 1;
    }
    Ok(out)
}

/// Action tables of the regime's edge at every Landau level in the regime.
/// Levels where the local Reeb graph lacks the edge are skipped.
pub fn regime_tables(
    p: &FourierPotential,
    eps: f64,
    regime: &Regime,
    h: f64,
) -> Result<Vec<RegimeTable>, SpectraError> {
    let levels = levels_in(regime, h)?;
    let built: Vec<Result<Option<RegimeTable>, SpectraError>> = levels
        .par_iter()
        .map(|&(mu, i1)| {
            let ctx = ActionContext::new(p, eps, i1)?;
            let edge = match ctx.graph().edge(regime.edge) {
                Some(e) => e.clone(),
                None => return Ok(None),
            };
            if edge.drift.d != regime.drift.d {
                return Err(SpectraError::Domain(format!(
                    "drift {:?} at I1 = {i1} differs from regime {} drift {:?}",
                    edge.drift.d, regime.id, regime.drift.d
                )));
            }
            let table = EdgeActionTable::build_unchecked(Arc::new(ctx), regime.edge)?;
            Ok(Some(RegimeTable { mu, table }))
        })
        .collect();
    let mut out = Vec::new();
    for t in built {
        if let Some(t) = t? {
            out.push(t);
        }
    }
    Ok(out)
}

/// Bohr–Sommerfeld points I₂^ν = (ν + ½)·h on a contractible edge, keeping
/// the states at least δ (in I₂) away from the separatrix end.
pub fn quantize_boundary(
    regime: &Regime,
    tables: &[RegimeTable],
    h: f64,
    delta: f64,
) -> Result<SpectralSeries, SpectraError> {
    if regime.kind != RegimeKind::Boundary {
        return Err(SpectraError::Domain(format!(
            "regime {} is not a boundary regime",
            regime.id
        )));
    }
    check_step(h, delta)?;
    let per_level: Vec<Result<Vec<QuantizedState>, SpectraError>> = tables
        .par_iter()
        .map(|rt| {
            let (a, b) = rt.table.action_range();
            let i1 = rt.table.i1();
            // i1 spans [0, I^{1+}], i4 spans [I^{4−}, 0].
            let (lo, hi) = match regime.edge {
                EdgeId::I1 => (a, b - delta),
                _ => (a + delta, b),
            };
            let nu_lo = (lo / h - 0.5).ceil() as i64;
            let nu_hi = (hi / h - 0.5).floor() as i64;
            let (nu_lo, nu_hi) = match regime.edge {
                EdgeId::I1 => (nu_lo.max(0), nu_hi),
                _ => (nu_lo, nu_hi.min(-1)),
            };
            let mut states = Vec::new();
            for nu in nu_lo..=nu_hi {
                let i2 = (nu as f64 + 0.5) * h;
                if !(i2 >= lo && i2 <= hi) {
                    continue;
                }
                let e = energy_from_actions(&rt.table, i1, i2)?;
                states.push(QuantizedState {
                    regime: regime.id.clone(),
                    edge: regime.edge,
                    mu: rt.mu,
                    nu: Some(nu),
                    i1,
                    i2: ActionValue::Point { value: i2 },
                    e_low: e,
                    e_high: e,
                });
            }
            Ok(states)
        })
        .collect();
    let mut states = Vec::new();
    for s in per_level {
        states.extend(s?);
    }
    Ok(SpectralSeries {
        regime: regime.id.clone(),
        edge: regime.edge,
        kind: SeriesKind::Points,
        accuracy: ACCURACY_TAG,
        states,
    })
}

/// Energy intervals swept by the open edge over its δ-trimmed action range.
pub fn quantize_interior(regime: &Regime, tables: &[RegimeTable], delta: f64) -> Result<SpectralSeries, SpectraError> {
    if regime.kind != RegimeKind::Interior {
        return Err(SpectraError::Domain(format!(
            "regime {} is not an interior regime",
            regime.id
        )));
    }
    if !(delta >= 0.0) {
        return Err(SpectraError::Domain(format!("delta must be non-negative, got {delta}")));
    }
    let per_level: Vec<Result<Option<QuantizedState>, SpectraError>> = tables
        .par_iter()
        .map(|rt| {
            let (a, b) = rt.table.action_range();
            let (lo, hi) = (a + delta, b - delta);
            if !(hi > lo) {
                return Ok(None);
            }
            let i1 = rt.table.i1();
            let e_lo = energy_from_actions(&rt.table, i1, lo)?;
            let e_hi = energy_from_actions(&rt.table, i1, hi)?;
            Ok(Some(QuantizedState {
                regime: regime.id.clone(),
                edge: regime.edge,
                mu: rt.mu,
                nu: None,
                i1,
                i2: ActionValue::Interval { lo, hi },
                e_low: e_lo.min(e_hi),
                e_high: e_lo.max(e_hi),
            }))
        })
        .collect();
    let mut states = Vec::new();
    for s in per_level {
        if let Some(s) = s? {
            states.push(s);
        }
    }
    Ok(SpectralSeries {
        regime: regime.id.clone(),
        edge: regime.edge,
        kind: SeriesKind::Intervals,
        accuracy: ACCURACY_TAG,
        states,
    })
}

fn check_step(h: f64, delta: f64) -> Result<(), SpectraError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(SpectraError::Domain(format!("h must be positive, got {h}")));
    }
    if !(delta >= 0.0) {
        return Err(SpectraError::Domain(format!("delta must be non-negative, got {delta}")));
    }
    Ok(())
}
