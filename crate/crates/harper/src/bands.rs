use crate::{bloch_matrix, general_symbol_matrix, harper_from_landau, HarperError, HarperModel};
use magspec_lattice::{FluxRatio, FourierPotential};
use magspec_numerics::{hermitian_eigenvalues, HermitianMatrix};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write;

pub const DEFAULT_GRID: (usize, usize) = (64, 64);
/// Gaps narrower than this are reported as touching.
pub const GAP_FLOOR: f64 = 1e-9;
/// Largest flux numerator N (Bloch matrix dimension) accepted by the sweeps.
pub const MAX_FLUX_NUMERATOR: usize = 1024;
/// Endpoint refinement factor of the local grid.
const REFINE: usize = 4;

/// Union of touching eigenvalue slots, in λ units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarperBand {
    pub lo: f64,
    pub hi: f64,
    /// Inclusive range of eigenvalue indices merged into this band.
    pub first_slot: usize,
    pub last_slot: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandTable {
    pub i1: f64,
    pub eps: f64,
    pub grid: (usize, usize),
    pub gap_floor: f64,
    /// Per-index [min, max] of the sorted eigenvalues over the sweep.
    pub slots: Vec<(f64, f64)>,
    pub bands: Vec<HarperBand>,
    /// Largest change of any sorted eigenvalue between adjacent grid points.
    pub max_jump: f64,
}

impl BandTable {
    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    /// Gaps between consecutive bands (λ units).
    pub fn gaps(&self) -> Vec<f64> {
        self.bands.windows(2).map(|w| w[1].lo - w[0].hi).collect()
    }

    /// max λ − min λ over the spectrum.
    pub fn extent(&self) -> f64 {
        match (self.bands.first(), self.bands.last()) {
            (Some(a), Some(b)) => b.hi - a.lo,
            _ => 0.0,
        }
    }

    /// Σ band lengths (λ units).
    pub fn measure(&self) -> f64 {
        self.bands.iter().map(|b| b.hi - b.lo).sum()
    }

    /// Header `band,E_minus,E_plus,lambda_minus,lambda_plus`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("band,E_minus,E_plus,lambda_minus,lambda_plus\n");
        for (i, b) in self.bands.iter().enumerate() {
            let (e0, e1) = (self.i1 + self.eps * b.lo, self.i1 + self.eps * b.hi);
            let _ = writeln!(s, "{i},{e0:.16e},{e1:.16e},{:.16e},{:.16e}", b.lo, b.hi);
        }
        s
    }
}

fn eigs(m: Result<HermitianMatrix, HarperError>) -> Result<Vec<f64>, HarperError> {
    Ok(hermitian_eigenvalues(&m?))
}

/// Sweeps (θ₁, φ₀) over [0, 2π/N]² (both ends included), takes per-index
/// min/max and refines each extremum on a local grid ×4 finer.
fn sweep<F>(n: usize, grid: (usize, usize), i1: f64, eps: f64, build: F) -> Result<BandTable, HarperError>
where
    F: Fn(f64, f64) -> Result<HermitianMatrix, HarperError> + Sync,
{
    if grid.0 < 2 || grid.1 < 2 {
        return Err(HarperError::Domain(format!("grid must be at least 2x2, got {grid:?}")));
    }
    if n == 0 || n > MAX_FLUX_NUMERATOR {
        return Err(HarperError::Domain(format!(
            "flux numerator {n} outside 1..={MAX_FLUX_NUMERATOR}"
        )));
    }
    let period = 2.0 * PI / n as f64;
    let (d0, d1) = (period / (grid.0 - 1) as f64, period / (grid.1 - 1) as f64);
    let points: Vec<(usize, usize)> = (0..grid.0).flat_map(|a| (0..grid.1).map(move |b| (a, b))).collect();
    let values: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&(a, b)| eigs(build(a as f64 * d0, b as f64 * d1)))
        .collect::<Result<_, _>>()?;
    let at = |a: usize, b: usize| &values[a * grid.1 + b];

    let mut max_jump = 0.0f64;
    for a in 0..grid.0 {
        for b in 0..grid.1 {
            for (da, db) in [(1, 0), (0, 1)] {
                if a + da < grid.0 && b + db < grid.1 {
                    let (u, v) = (at(a, b), at(a + da, b + db));
                    max_jump = u.iter().zip(v).map(|(x, y)| (x - y).abs()).fold(max_jump, f64::max);
                }
            }
        }
    }

    let mut slots = Vec::with_capacity(n);
    for i in 0..n {
        let (mut lo, mut lo_at, mut hi, mut hi_at) = (f64::INFINITY, 0, f64::NEG_INFINITY, 0);
        for (idx, v) in values.iter().enumerate() {
            if v[i] < lo {
                (lo, lo_at) = (v[i], idx);
            }
            if v[i] > hi {
                (hi, hi_at) = (v[i], idx);
            }
        }
        let local = |idx: usize| -> Vec<(f64, f64)> {
            let (c0, c1) = (points[idx].0 as f64 * d0, points[idx].1 as f64 * d1);
            let r = REFINE as isize;
            (-r..=r)
                .flat_map(|s| {
                    (-r..=r).map(move |t| (c0 + s as f64 * d0 / REFINE as f64, c1 + t as f64 * d1 / REFINE as f64))
                })
                .collect()
        };
        let lo_ref: Vec<f64> = local(lo_at)
            .par_iter()
            .map(|&(t, p)| eigs(build(t, p)).map(|e| e[i]))
            .collect::<Result<_, _>>()?;
        let hi_ref: Vec<f64> = local(hi_at)
            .par_iter()
            .map(|&(t, p)| eigs(build(t, p)).map(|e| e[i]))
            .collect::<Result<_, _>>()?;
        lo = lo_ref.into_iter().fold(lo, f64::min);
        hi = hi_ref.into_iter().fold(hi, f64::max);
        slots.push((lo, hi));
    }

    let mut bands: Vec<HarperBand> = Vec::new();
    for (i, &(lo, hi)) in slots.iter().enumerate() {
        match bands.last_mut() {
            Some(b) if lo - b.hi < GAP_FLOOR => {
                b.hi = b.hi.max(hi);
                b.last_slot = i;
            }
            _ => bands.push(HarperBand {
                lo,
                hi,
                first_slot: i,
                last_slot: i,
            }),
        }
    }
    Ok(BandTable {
        i1,
        eps,
        grid,
        gap_floor: GAP_FLOOR,
        slots,
        bands,
        max_jump,
    })
}

/// Band table of the Harper model at flux η = N/M (N×N Bloch matrices).
pub fn band_table(model: &HarperModel, flux: FluxRatio, grid: (usize, usize)) -> Result<BandTable, HarperError> {
    model.check_commensurate(flux)?;
    sweep(flux.n() as usize, grid, model.i1, model.eps, |t, p| {
        bloch_matrix(model, flux, t, p)
    })
}

/// Band table of the Weyl-quantized averaged symbol of a general potential.
pub fn general_band_table(
    p: &FourierPotential,
    mu: u32,
    h: f64,
    eps: f64,
    flux: FluxRatio,
    grid: (usize, usize),
) -> Result<BandTable, HarperError> {
    general_symbol_matrix(p, mu, h, flux, 0.0, 0.0)?;
    let i1 = (mu as f64 + 0.5) * h;
    sweep(flux.n() as usize, grid, i1, eps, |t, ph| {
        general_symbol_matrix(p, mu, h, flux, t, ph)
    })
}

/// One CSV row per (flux, band) of the cosine example's Harper model at
/// h = 2π/(βη), header `flux,band,E_minus,E_plus,lambda_minus,lambda_plus`.
pub fn butterfly_csv(
    p: &FourierPotential,
    mu: u32,
    eps: f64,
    fluxes: &[FluxRatio],
    grid: (usize, usize),
) -> Result<String, HarperError> {
    let a22 = p.lattice().a22();
    let mut s = String::from("flux,band,E_minus,E_plus,lambda_minus,lambda_plus\n");
    for &flux in fluxes {
        let model = harper_from_landau(p, mu, a22 / flux.value(), eps)?;
        let table = band_table(&model, flux, grid)?;
        for line in table.to_csv().lines().skip(1) {
            let _ = writeln!(s, "{flux},{line}");
        }
    }
    Ok(s)
}
