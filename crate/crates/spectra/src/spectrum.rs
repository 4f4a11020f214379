use crate::{
    landau_level, quantize_boundary, quantize_interior, regime_tables, SeriesKind, SpectraError, SpectralSeries,
};
use magspec_classical::{build_reeb_graph, build_regimes, ReebOptions, RegimeKind, RegimeMap};
use magspec_lattice::FourierPotential;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write;

/// All quantized energies at one Landau level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LandauBand {
    pub mu: u32,
    pub i1: f64,
    /// I₁ + ε·g_min(I₁).
    pub e_min: f64,
    /// I₁ + ε·g_max(I₁).
    pub e_max: f64,
    /// ε·(g_max − g_min).
    pub width: f64,
    pub points: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemiclassicalSpectrum {
    pub h: f64,
    pub eps: f64,
    pub delta: f64,
    pub i1_max: f64,
    pub regimes: RegimeMap,
    pub series: Vec<SpectralSeries>,
    pub bands: Vec<LandauBand>,
    /// Union of all points and intervals on the E axis, overlaps merged.
    pub projection: Vec<(f64, f64)>,
    /// No two Landau bands [e_min, e_max] overlap.
    pub bands_disjoint: bool,
}

const REGIME_CURVE_SAMPLES: usize = 201;

/// Σ for all Landau levels with I₁^μ ≤ `i1_max`. `delta` trims both the
/// critical-I₁ neighborhoods and the separatrix ends of every action range.
pub fn semiclassical_spectrum(
    p: &FourierPotential,
    eps: f64,
    h: f64,
    delta: f64,
    i1_max: f64,
) -> Result<SemiclassicalSpectrum, SpectraError> {
    let regimes = build_regimes(p, eps, i1_max, delta, REGIME_CURVE_SAMPLES)?;
    let mut series = Vec::with_capacity(regimes.regimes.len());
    for r in &regimes.regimes {
        let tables = regime_tables(p, eps, r, h)?;
        series.push(match r.kind {
            RegimeKind::Boundary => quantize_boundary(r, &tables, h, delta)?,
            RegimeKind::Interior => quantize_interior(r, &tables, delta)?,
        });
    }

    let mut mus = Vec::new();
    let mut mu = 0u32;
    while landau_level(mu, h)? <= i1_max {
        mus.push(mu);
        mu += 1;
    }
    let extents: Vec<Result<(u32, f64, f64, f64), SpectraError>> = mus
        .par_iter()
        .map(|&mu| {
            let i1 = landau_level(mu, h)?;
            let graph = build_reeb_graph(&p.averaged(i1)?, &ReebOptions::default())?;
            Ok((mu, i1, graph.g_min, graph.g_max))
        })
        .collect();
    let mut bands = Vec::with_capacity(mus.len());
    for ext in extents {
        let (mu, i1, g_min, g_max) = ext?;
        let mut points = Vec::new();
        let mut intervals = Vec::new();
        for s in &series {
            for st in s.states.iter().filter(|st| st.mu == mu) {
                match s.kind {
                    SeriesKind::Points => points.push(st.e_low),
                    SeriesKind::Intervals => intervals.push((st.e_low, st.e_high)),
                }
            }
        }
        points.sort_by(f64::total_cmp);
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        bands.push(LandauBand {
            mu,
            i1,
            e_min: i1 + eps * g_min,
            e_max: i1 + eps * g_max,
            width: eps * (g_max - g_min),
            points,
            intervals,
        });
    }
    let bands_disjoint = bands.windows(2).all(|w| w[0].e_max < w[1].e_min);

    let mut spans: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.states.iter().map(|st| (st.e_low, st.e_high)))
        .collect();
    spans.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut projection: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in spans {
        match projection.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => projection.push((lo, hi)),
        }
    }
    Ok(SemiclassicalSpectrum {
        h,
        eps,
        delta,
        i1_max,
        regimes,
        series,
        bands,
        projection,
        bands_disjoint,
    })
}

impl SemiclassicalSpectrum {
    /// CSV with header `E_low,E_high,I1,regime,mu,nu`, rows ordered by
    /// (μ, ν, regime id).
    pub fn to_csv(&self) -> String {
        let mut rows: Vec<_> = self.series.iter().flat_map(|s| s.states.iter()).collect();
        rows.sort_by(|a, b| a.mu.cmp(&b.mu).then(a.nu.cmp(&b.nu)).then(a.regime.cmp(&b.regime)));
        let mut out = String::from("E_low,E_high,I1,regime,mu,nu\n");
        for st in rows {
            let nu = st.nu.map(|n| n.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{},{},{}",
                st.e_low, st.e_high, st.i1, st.regime, st.mu, nu
            );
        }
        out
    }
}
