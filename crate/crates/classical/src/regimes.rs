use crate::{
    build_reeb_graph, critical_i1_series, ClassicalError, CriticalSeries, DriftData, EdgeId, GraphKind, ReebOptions,
};
use magspec_lattice::FourierPotential;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    Boundary,
    Interior,
}

/// A domain of the (I₁, E) plane with uniform drift topology.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Regime {
    pub id: String,
    pub kind: RegimeKind,
    pub edge: EdgeId,
    /// δ-trimmed I₁ range.
    pub i1_interval: (f64, f64),
    /// Untrimmed I₁ range between consecutive critical values.
    pub i1_bounds: (f64, f64),
    pub drift: DriftData,
    pub delta: f64,
}

/// Critical energies at one I₁ sample: E = I₁ + ε·g.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundarySample {
    pub i1: f64,
    pub e_min: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    pub e_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeMap {
    pub eps: f64,
    pub series: CriticalSeries,
    pub regimes: Vec<Regime>,
    pub curves: Vec<BoundarySample>,
}

/// Partitions the (I₁, E) plane up to `i1_max` into regimes, excluding
/// δ-neighborhoods of critical I₁ values, and samples the boundary curves on
/// `grid` points.
pub fn build_regimes(
    p: &FourierPotential,
    eps: f64,
    i1_max: f64,
    delta: f64,
    grid: usize,
) -> Result<RegimeMap, ClassicalError> {
    if !(delta >= 0.0) {
        return Err(ClassicalError::Domain(format!(
            "delta must be non-negative, got {delta}"
        )));
    }
    if !(eps >= 0.0) {
        return Err(ClassicalError::Domain(format!(
            "epsilon must be non-negative, got {eps}"
        )));
    }
    let series = critical_i1_series(p, i1_max)?;
    let mut cuts = vec![0.0];
    cuts.extend(series.all());
    cuts.push(i1_max);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let intervals: Vec<(usize, (f64, f64))> = cuts.windows(2).map(|w| (w[0], w[1])).enumerate().collect();
    let per_interval: Vec<Result<Vec<Regime>, ClassicalError>> = intervals
        .par_iter()
        .map(|&(k, (lo, hi))| {
            let trim_lo = if lo == 0.0 { 0.0 } else { lo + delta };
            let trim_hi = if hi == i1_max { hi } else { hi - delta };
            if trim_hi <= trim_lo {
                return Ok(Vec::new());
            }
            let av = p.averaged(0.5 * (trim_lo + trim_hi))?;
            let graph = build_reeb_graph(&av, &ReebOptions::default())?;
            let mut out = Vec::new();
            for edge in &graph.edges {
                let kind = if edge.contractible {
                    RegimeKind::Boundary
                } else {
                    RegimeKind::Interior
                };
                if graph.kind == GraphKind::DegenerateTypeII {
                    continue;
                }
                out.push(Regime {
                    id: format!("r{k}-{}", edge.id.label()),
                    kind,
                    edge: edge.id,
                    i1_interval: (trim_lo, trim_hi),
                    i1_bounds: (lo, hi),
                    drift: edge.drift,
                    delta,
                });
            }
            Ok(out)
        })
        .collect();
    let mut regimes = Vec::new();
    for r in per_interval {
        regimes.extend(r?);
    }

    let n = grid.max(2);
    let xs: Vec<f64> = (0..n).map(|k| i1_max * k as f64 / (n - 1) as f64).collect();
    let curves: Vec<Result<BoundarySample, ClassicalError>> =
        xs.par_iter().map(|&i1| boundary_sample(p, eps, i1)).collect();
    let curves = curves.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(RegimeMap {
        eps,
        series,
        regimes,
        curves,
    })
}

fn boundary_sample(p: &FourierPotential, eps: f64, i1: f64) -> Result<BoundarySample, ClassicalError> {
    let (g_min, g_minus, g_plus, g_max) = match p.as_cosine() {
        Some(c) => {
            let r = (2.0 * i1).sqrt();
            let a = (c.a * magspec_numerics::bessel_j0(r)?).abs();
            let b = (c.b * magspec_numerics::bessel_j0(c.beta * r)?).abs();
            (-a - b, -(a - b).abs(), (a - b).abs(), a + b)
        }
        None => {
            let set = crate::find_critical_points(&p.averaged(i1)?);
            let vals: Vec<f64> = set.points.iter().map(|q| q.value).collect();
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let saddles: Vec<f64> = set.of_kind(crate::CriticalKind::Saddle).map(|q| q.value).collect();
            if saddles.len() == 2 && !set.degenerate {
                (lo, saddles[0].min(saddles[1]), saddles[0].max(saddles[1]), hi)
            } else {
                (lo, lo, hi, hi)
            }
        }
    };
    Ok(BoundarySample {
        i1,
        e_min: i1 + eps * g_min,
        e_minus: i1 + eps * g_minus,
        e_plus: i1 + eps * g_plus,
        e_max: i1 + eps * g_max,
    })
}
