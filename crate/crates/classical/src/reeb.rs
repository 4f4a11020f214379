use crate::{
    find_critical_points, trace_level_set, ClassicalError, CriticalKind, CriticalPointSet, DriftData, LevelSetOptions,
};
use magspec_lattice::AveragedPotential;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeId {
    I1,
    I2,
    I3,
    I4,
}

impl EdgeId {
    pub fn label(&self) -> &'static str {
        match self {
            EdgeId::I1 => "i1",
            EdgeId::I2 => "i2",
            EdgeId::I3 => "i3",
            EdgeId::I4 => "i4",
        }
    }

    pub fn contractible(&self) -> bool {
        matches!(self, EdgeId::I1 | EdgeId::I4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    /// Minimal Morse function: four edges.
    Generic,
    /// Saddle values coincide: edges i1 and i4 only.
    DegenerateTypeI,
    /// Extrema merged with saddles into critical lines: edges i2 and i3 only.
    DegenerateTypeII,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReebVertex {
    pub g: f64,
    /// "minimum", "maximum", "saddle", "double_saddle" or "critical_line".
    pub kind: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReebEdge {
    pub id: EdgeId,
    pub energy_range: (f64, f64),
    pub contractible: bool,
    pub drift: DriftData,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReebGraph {
    pub i1: f64,
    pub kind: GraphKind,
    pub g_min: f64,
    pub g_minus: f64,
    pub g_plus: f64,
    pub g_max: f64,
    pub vertices: Vec<ReebVertex>,
    pub edges: Vec<ReebEdge>,
    pub critical: CriticalPointSet,
    pub y_min: Option<[f64; 2]>,
    pub y_max: Option<[f64; 2]>,
    pub y_minus: Option<[f64; 2]>,
    pub y_plus: Option<[f64; 2]>,
}

impl ReebGraph {
    pub fn edge(&self, id: EdgeId) -> Option<&ReebEdge> {
        self.edges.iter().find(|e| e.id == id)
    }

    /// Drift vector of the open edge i2, if any.
    pub fn drift(&self) -> Option<DriftData> {
        self.edge(EdgeId::I2).map(|e| e.drift)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReebOptions {
    /// Type-I threshold on g₊ − g₋ relative to Σ|v̄_k|.
    pub type_one_tol: f64,
    pub level_set: LevelSetOptions,
}

impl Default for ReebOptions {
    fn default() -> Self {
        Self {
            type_one_tol: 1e-9,
            level_set: LevelSetOptions::default(),
        }
    }
}

pub fn build_reeb_graph(av: &AveragedPotential, opts: &ReebOptions) -> Result<ReebGraph, ClassicalError> {
    let critical = find_critical_points(av);
    if critical.points.is_empty() {
        return Err(ClassicalError::Domain(format!(
            "averaged potential is constant at I1 = {}",
            av.i1()
        )));
    }
    let vscale = av.coeff_l1();
    let values: Vec<f64> = critical.points.iter().map(|p| p.value).collect();
    let g_lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let g_hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let i1 = av.i1();

    if critical.degenerate {
        let drift = open_drift(av, 0.5 * (g_lo + g_hi), &[], &opts.level_set)?;
        return Ok(ReebGraph {
            i1,
            kind: GraphKind::DegenerateTypeII,
            g_min: g_lo,
            g_minus: g_lo,
            g_plus: g_hi,
            g_max: g_hi,
            vertices: vec![
                ReebVertex {
                    g: g_lo,
                    kind: "critical_line",
                },
                ReebVertex {
                    g: g_hi,
                    kind: "critical_line",
                },
            ],
            edges: vec![
                ReebEdge {
                    id: EdgeId::I2,
                    energy_range: (g_lo, g_hi),
                    contractible: false,
                    drift,
                },
                ReebEdge {
                    id: EdgeId::I3,
                    energy_range: (g_lo, g_hi),
                    contractible: false,
                    drift: drift.negated(),
                },
            ],
            critical,
            y_min: None,
            y_max: None,
            y_minus: None,
            y_plus: None,
        });
    }

    let mins: Vec<_> = critical.of_kind(CriticalKind::Minimum).copied().collect();
    let maxs: Vec<_> = critical.of_kind(CriticalKind::Maximum).copied().collect();
    let saddles: Vec<_> = critical.of_kind(CriticalKind::Saddle).copied().collect();
    if critical.points.len() > 4 || mins.len() > 1 || maxs.len() > 1 || saddles.len() > 2 {
        let mut extra = Vec::new();
        extra.extend(mins.iter().skip(1).map(|p| p.y));
        extra.extend(maxs.iter().skip(1).map(|p| p.y));
        extra.extend(saddles.iter().skip(2).map(|p| p.y));
        return Err(ClassicalError::UnsupportedTopology {
            message: format!(
                "{} minima, {} maxima, {} saddles at I1 = {i1}; only the minimal Morse case is supported",
                mins.len(),
                maxs.len(),
                saddles.len()
            ),
            extra,
        });
    }
    if mins.len() != 1 || maxs.len() != 1 || saddles.len() != 2 {
        return Err(ClassicalError::IncompleteSearch(format!(
            "found {} minima, {} maxima, {} saddles at I1 = {i1}",
            mins.len(),
            maxs.len(),
            saddles.len()
        )));
    }
    let (s_lo, s_hi) = if saddles[0].value <= saddles[1].value {
        (saddles[0], saddles[1])
    } else {
        (saddles[1], saddles[0])
    };
    let (g_min, g_max) = (mins[0].value, maxs[0].value);
    let (g_minus, g_plus) = (s_lo.value, s_hi.value);
    let common = (Some(mins[0].y), Some(maxs[0].y), Some(s_lo.y), Some(s_hi.y));

    if g_plus - g_minus < opts.type_one_tol * vscale {
        let gs = 0.5 * (g_minus + g_plus);
        return Ok(ReebGraph {
            i1,
            kind: GraphKind::DegenerateTypeI,
            g_min,
            g_minus: gs,
            g_plus: gs,
            g_max,
            vertices: vec![
                ReebVertex {
                    g: g_min,
                    kind: "minimum",
                },
                ReebVertex {
                    g: gs,
                    kind: "double_saddle",
                },
                ReebVertex {
                    g: g_max,
                    kind: "maximum",
                },
            ],
            edges: vec![
                ReebEdge {
                    id: EdgeId::I1,
                    energy_range: (g_min, gs),
                    contractible: true,
                    drift: DriftData::zero(),
                },
                ReebEdge {
                    id: EdgeId::I4,
                    energy_range: (gs, g_max),
                    contractible: true,
                    drift: DriftData::zero(),
                },
            ],
            critical,
            y_min: common.0,
            y_max: common.1,
            y_minus: common.2,
            y_plus: common.3,
        });
    }

    let drift = open_drift(av, 0.5 * (g_minus + g_plus), &[g_minus, g_plus], &opts.level_set)?;
    Ok(ReebGraph {
        i1,
        kind: GraphKind::Generic,
        g_min,
        g_minus,
        g_plus,
        g_max,
        vertices: vec![
            ReebVertex {
                g: g_min,
                kind: "minimum",
            },
            ReebVertex {
                g: g_minus,
                kind: "saddle",
            },
            ReebVertex {
                g: g_plus,
                kind: "saddle",
            },
            ReebVertex {
                g: g_max,
                kind: "maximum",
            },
        ],
        edges: vec![
            ReebEdge {
                id: EdgeId::I1,
                energy_range: (g_min, g_minus),
                contractible: true,
                drift: DriftData::zero(),
            },
            ReebEdge {
                id: EdgeId::I2,
                energy_range: (g_minus, g_plus),
                contractible: false,
                drift,
            },
            ReebEdge {
                id: EdgeId::I3,
                energy_range: (g_minus, g_plus),
                contractible: false,
                drift: drift.negated(),
            },
            ReebEdge {
                id: EdgeId::I4,
                energy_range: (g_plus, g_max),
                contractible: true,
                drift: DriftData::zero(),
            },
        ],
        critical,
        y_min: common.0,
        y_max: common.1,
        y_minus: common.2,
        y_plus: common.3,
    })
}

/// Drift of the open level curves at g: the lexicographically positive one
/// of the two opposite windings.
fn open_drift(
    av: &AveragedPotential,
    g: f64,
    saddles: &[f64],
    base: &LevelSetOptions,
) -> Result<DriftData, ClassicalError> {
    let opts = LevelSetOptions {
        saddle_values: Some(saddles.to_vec()),
        ..base.clone()
    };
    let comps = trace_level_set(av, g, &opts)?;
    let windings: Vec<(i64, i64)> = comps.iter().map(|c| c.winding).collect();
    if comps.len() != 2 || windings[0] == (0, 0) || windings[0] != (-windings[1].0, -windings[1].1) {
        return Err(ClassicalError::Tracing(format!(
            "expected two open level curves with opposite windings at g = {g}, found windings {windings:?}"
        )));
    }
    let w = windings[0];
    let d = if w.0 > 0 || (w.0 == 0 && w.1 > 0) {
        w
    } else {
        (-w.0, -w.1)
    };
    DriftData::new(d)
}
