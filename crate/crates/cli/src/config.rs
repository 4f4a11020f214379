//! Run configuration and its canonical form.
//!
//! Every field is optional on input. [`RunConfig::canonicalize`] validates the
//! document and fills each omitted field with its default, so the canonical
//! form lists every value a run depends on. `threads` only affects scheduling
//! and is dropped from the canonical form.

use magspec_lattice::{FluxRatio, PhysicalParams, PotentialSpec};
use magspec_sturm1d::{Potential1D, MIN_GRID};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalSpec>,
    /// η = N/M; overrides h by h = a₂₂·M/N.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flux: Option<FluxSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(
        default,
        rename = "I1_max",
        alias = "i1_max",
        skip_serializing_if = "Option::is_none"
    )]
    pub i1_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grids: Option<Grids>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub average: Option<AverageOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reeb: Option<ReebOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions: Option<ActionsOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bands: Option<BandsOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub harper: Option<HarperOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bloch: Option<BlochOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sturm: Option<SturmOptions>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub h: f64,
    pub epsilon: f64,
}

/// Physical inputs in one consistent unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalSpec {
    pub b_field: f64,
    pub l0: f64,
    pub mass: f64,
    pub charge: f64,
    pub light_speed: f64,
    pub hbar: f64,
    pub vmax: f64,
}

impl From<PhysicalSpec> for PhysicalParams {
    fn from(p: PhysicalSpec) -> Self {
        PhysicalParams {
            b_field: p.b_field,
            l0: p.l0,
            mass: p.mass,
            charge: p.charge,
            light_speed: p.light_speed,
            hbar: p.hbar,
            vmax: p.vmax,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxSpec {
    pub n: i64,
    pub m: u64,
}

impl FluxSpec {
    pub fn ratio(self) -> Result<FluxRatio, CliError> {
        if self.n <= 0 {
            return Err(CliError::config(format!(
                "flux numerator must be positive, got {}",
                self.n
            )));
        }
        FluxRatio::new(self.n, self.m).ok_or_else(|| CliError::config("flux denominator must be positive"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    /// I₁ samples of the regime boundary curves.
    pub regimes: usize,
    /// Harper sweep grid over (θ₁, φ₀).
    pub harper: [usize; 2],
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            regimes: 201,
            harper: [64, 64],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AverageOptions {
    #[serde(rename = "I1", alias = "i1")]
    pub i1: Vec<f64>,
    /// Points per cell side of the sampling grid.
    pub y_points: usize,
}

impl Default for AverageOptions {
    fn default() -> Self {
        Self {
            i1: vec![0.05, 0.5, 1.0, 2.0],
            y_points: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReebOptions {
    #[serde(rename = "I1", alias = "i1")]
    pub i1: Vec<f64>,
}

impl Default for ReebOptions {
    fn default() -> Self {
        Self { i1: vec![0.5] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ActionsOptions {
    #[serde(rename = "I1", alias = "i1")]
    pub i1: f64,
}

impl Default for ActionsOptions {
    fn default() -> Self {
        Self { i1: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BandsOptions {
    pub mu: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarperOptions {
    pub mu: u32,
    pub fluxes: Vec<FluxSpec>,
}

impl Default for HarperOptions {
    fn default() -> Self {
        Self {
            mu: 0,
            fluxes: vec![FluxSpec { n: 5, m: 2 }, FluxSpec { n: 7, m: 3 }],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlochOptions {
    pub q1: f64,
    pub q2: f64,
    pub s: u64,
    pub window: i64,
    /// Landau level I₁ for the dispersion-crossing search; null skips it.
    #[serde(rename = "crossings_I1", alias = "crossings_i1")]
    pub crossings_i1: Option<f64>,
}

impl Default for BlochOptions {
    fn default() -> Self {
        Self {
            q1: 0.0,
            q2: 0.0,
            s: 0,
            window: 4,
            crossings_i1: None,
        }
    }
}

/// 1D potential: `{"cosine": {"amplitude": a}}` or
/// `{"fourier": {"a0": c, "terms": [{"k": 1, "a": 1.0, "b": 0.0}]}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Potential1DSpec {
    Cosine { cosine: CosineTerm },
    Fourier { fourier: FourierSeries1D },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosineTerm {
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierSeries1D {
    #[serde(default)]
    pub a0: f64,
    pub terms: Vec<FourierTerm1D>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierTerm1D {
    pub k: u32,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
}

impl Potential1DSpec {
    pub fn build(&self) -> Result<Potential1D, CliError> {
        Ok(match self {
            Potential1DSpec::Cosine { cosine } => Potential1D::cosine(cosine.amplitude)?,
            Potential1DSpec::Fourier { fourier } => {
                let terms: Vec<_> = fourier.terms.iter().map(|t| (t.k, t.a, t.b)).collect();
                Potential1D::from_fourier(fourier.a0, &terms)?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SturmOptions {
    pub potential: Potential1DSpec,
    /// FD grid points per period.
    pub grid: usize,
    /// Bands computed by the oracle.
    pub levels: usize,
    /// q samples on [0, 1].
    pub q_samples: usize,
}

impl Default for SturmOptions {
    fn default() -> Self {
        Self {
            potential: Potential1DSpec::Cosine {
                cosine: CosineTerm { amplitude: 1.0 },
            },
            grid: 1024,
            levels: 8,
            q_samples: 11,
        }
    }
}

pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_I1_MAX: f64 = 0.5;

fn finite(name: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(format!("{name} must be finite, got {x}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("invalid config: {e}")))
    }

    /// Validated copy with every default filled in and `threads` removed.
    pub fn canonicalize(&self) -> Result<RunConfig, CliError> {
        let version = self.schema_version.unwrap_or(SCHEMA_VERSION);
        if version != SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "unsupported schema_version {version} (expected {SCHEMA_VERSION})"
            )));
        }
        match (&self.params, &self.physical) {
            (Some(p), None) => {
                finite("h", p.h)?;
                finite("epsilon", p.epsilon)?;
                if p.h <= 0.0 || p.epsilon < 0.0 {
                    return Err(CliError::config(format!("need h > 0 and epsilon >= 0, got {p:?}")));
                }
            }
            (None, Some(_)) => {}
            _ => {
                return Err(CliError::config(
                    "exactly one of `params` and `physical` must be present",
                ))
            }
        }
        if let Some(f) = self.flux {
            f.ratio()?;
            if self.potential.is_none() {
                return Err(CliError::config("a flux override needs `potential` to fix a22"));
            }
        }
        let delta = self.delta.unwrap_or(DEFAULT_DELTA);
        finite("delta", delta)?;
        if delta < 0.0 {
            return Err(CliError::config(format!("delta must be non-negative, got {delta}")));
        }
        let i1_max = self.i1_max.unwrap_or(DEFAULT_I1_MAX);
        finite("I1_max", i1_max)?;
        if i1_max <= 0.0 {
            return Err(CliError::config(format!("I1_max must be positive, got {i1_max}")));
        }
        let grids = self.grids.unwrap_or_default();
        if grids.regimes < 2 || grids.harper.iter().any(|&n| n < 2) {
            return Err(CliError::config(format!(
                "grids need at least 2 points each, got {grids:?}"
            )));
        }
        let average = self.average.clone().unwrap_or_default();
        if average.y_points == 0 || average.i1.iter().any(|&i| !(i.is_finite() && i >= 0.0)) {
            return Err(CliError::config("average needs y_points >= 1 and finite I1 >= 0"));
        }
        let reeb = self.reeb.clone().unwrap_or_default();
        if reeb.i1.iter().any(|&i| !(i.is_finite() && i >= 0.0)) {
            return Err(CliError::config("reeb needs finite I1 >= 0"));
        }
        let actions = self.actions.unwrap_or_default();
        if !(actions.i1.is_finite() && actions.i1 >= 0.0) {
            return Err(CliError::config("actions needs finite I1 >= 0"));
        }
        let harper = self.harper.clone().unwrap_or_default();
        for f in &harper.fluxes {
            f.ratio()?;
        }
        let bloch = self.bloch.unwrap_or_default();
        finite("bloch.q1", bloch.q1)?;
        finite("bloch.q2", bloch.q2)?;
        if bloch.window < 0 {
            return Err(CliError::config("bloch.window must be non-negative"));
        }
        if let Some(i1) = bloch.crossings_i1 {
            if !(i1.is_finite() && i1 > 0.0) {
                return Err(CliError::config("bloch.crossings_I1 must be positive"));
            }
        }
        let sturm = self.sturm.clone().unwrap_or_default();
        if sturm.grid < MIN_GRID || sturm.levels == 0 || sturm.levels > sturm.grid / 4 || sturm.q_samples < 2 {
            return Err(CliError::config(format!(
                "sturm needs grid >= {MIN_GRID}, 1 <= levels <= grid/4 and q_samples >= 2"
            )));
        }
        sturm.potential.build()?;
        if let Some(p) = &self.potential {
            p.build()?;
        }
        Ok(RunConfig {
            schema_version: Some(version),
            potential: self.potential.clone(),
            params: self.params,
            physical: self.physical,
            flux: self.flux,
            delta: Some(delta),
            i1_max: Some(i1_max),
            grids: Some(grids),
            threads: None,
            average: Some(average),
            reeb: Some(reeb),
            actions: Some(actions),
            bands: Some(self.bands.unwrap_or_default()),
            harper: Some(harper),
            bloch: Some(bloch),
            sturm: Some(sturm),
        })
    }

    /// Canonical JSON text: pretty-printed with a trailing LF.
    pub fn to_canonical_json(&self) -> Result<String, CliError> {
        let c = self.canonicalize()?;
        let mut s = serde_json::to_string_pretty(&c).map_err(|e| CliError::runtime(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}
