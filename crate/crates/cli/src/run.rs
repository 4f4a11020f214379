//! Command dispatch.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::Arc;

use magspec_actions::{ActionContext, EdgeActionTable};
use magspec_bloch::{
    boundary_family, dispersion_crossings, seed_gram_determinant, verify_boundary_conditions, QuasiMomentum,
};
use magspec_classical::{build_reeb_graph, build_regimes, ReebOptions as GraphOptions};
use magspec_harper::{band_table, harper_from_landau};
use magspec_lattice::{
    averaged_potential, flux_ratio, physical_to_dimensionless, FluxRatio, FourierPotential, SpectralParams,
};
use magspec_spectra::{landau_level, semiclassical_spectrum, subband_count};
use magspec_sturm1d::{band_structure_csv, bs_levels_lower, dispersion_csv, gap_ends_upper, oracle_bands};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{CliError, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Average,
    Reeb,
    Regimes,
    Actions,
    Spectrum,
    Bands,
    Bloch,
    Harper,
    Sturm,
    Units,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Average,
        Command::Reeb,
        Command::Regimes,
        Command::Actions,
        Command::Spectrum,
        Command::Bands,
        Command::Bloch,
        Command::Harper,
        Command::Sturm,
        Command::Units,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Average => "average",
            Command::Reeb => "reeb",
            Command::Regimes => "regimes",
            Command::Actions => "actions",
            Command::Spectrum => "spectrum",
            Command::Bands => "bands",
            Command::Bloch => "bloch",
            Command::Harper => "harper",
            Command::Sturm => "sturm",
            Command::Units => "units",
        }
    }

    fn accuracy(self) -> Accuracy {
        let (h, eps) = match self {
            Command::Average | Command::Reeb | Command::Regimes | Command::Actions => ("classical", "O(eps^2)"),
            Command::Spectrum | Command::Bloch => ("O(h^2)", "O(eps^2)"),
            Command::Bands | Command::Harper => ("O(h)", "O(eps^2)"),
            Command::Sturm => ("O(h^2)", "none"),
            Command::Units => ("exact", "exact"),
        };
        Accuracy {
            order_in_h: h.into(),
            order_in_eps: eps.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Accuracy {
    pub order_in_h: String,
    pub order_in_eps: String,
}

/// Result of one run. `files` holds CSV contents by file name; the JSON form
/// lists only the names.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultEnvelope {
    pub command: Command,
    pub toolkit_version: String,
    pub config: RunConfig,
    pub accuracy: Accuracy,
    /// h and ε after applying the flux override or the physical map.
    pub parameters: SpectralParams,
    pub payload: Value,
    #[serde(serialize_with = "file_names")]
    pub files: BTreeMap<String, String>,
}

fn file_names<S: serde::Serializer>(files: &BTreeMap<String, String>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(files.keys())
}

impl ResultEnvelope {
    /// Pretty JSON with sorted payload keys and a trailing LF.
    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::runtime(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::runtime(e.to_string()))
}

struct Context {
    cfg: RunConfig,
    potential: Option<FourierPotential>,
    params: SpectralParams,
}

impl Context {
    fn potential(&self) -> Result<&FourierPotential, CliError> {
        self.potential
            .as_ref()
            .ok_or_else(|| CliError::config("this command needs a `potential` block"))
    }

    /// Rational flux η = a₂₂/h.
    fn flux(&self) -> Result<FluxRatio, CliError> {
        let lat = self.potential()?.lattice();
        flux_ratio(lat, self.params.h).rational().ok_or_else(|| {
            CliError::config(format!(
                "flux a22/h = {} is not rational; set `flux` to fix h",
                lat.a22() / self.params.h
            ))
        })
    }
}

/// h and ε from `params` or `physical`, then the flux override.
fn resolve(cfg: &RunConfig, potential: Option<&FourierPotential>) -> Result<SpectralParams, CliError> {
    let base = match (&cfg.params, &cfg.physical) {
        (Some(p), _) => SpectralParams::new(p.h, p.epsilon)?,
        (None, Some(ph)) => physical_to_dimensionless(&(*ph).into())?.params,
        (None, None) => {
            return Err(CliError::config(
                "exactly one of `params` and `physical` must be present",
            ))
        }
    };
    match (cfg.flux, potential) {
        (Some(f), Some(p)) => {
            let r = f.ratio()?;
            Ok(SpectralParams::new(p.lattice().a22() / r.value(), base.epsilon)?)
        }
        _ => Ok(base),
    }
}

/// Validates, canonicalizes and runs `command`, keeping all output in memory.
pub fn run(command: Command, config: &RunConfig) -> Result<ResultEnvelope, CliError> {
    let cfg = config.canonicalize()?;
    let potential = cfg.potential.as_ref().map(|s| s.build()).transpose()?;
    let params = resolve(&cfg, potential.as_ref())?;
    let ctx = Context { cfg, potential, params };
    let mut files = BTreeMap::new();
    let payload = match command {
        Command::Average => average(&ctx, &mut files)?,
        Command::Reeb => reeb(&ctx)?,
        Command::Regimes => regimes(&ctx, &mut files)?,
        Command::Actions => actions(&ctx, &mut files)?,
        Command::Spectrum => spectrum(&ctx, &mut files)?,
        Command::Bands => bands(&ctx, &mut files)?,
        Command::Bloch => bloch(&ctx, &mut files)?,
        Command::Harper => harper(&ctx, &mut files)?,
        Command::Sturm => sturm(&ctx, &mut files)?,
        Command::Units => units(&ctx)?,
    };
    Ok(ResultEnvelope {
        command,
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        config: ctx.cfg,
        accuracy: command.accuracy(),
        parameters: params,
        payload,
        files,
    })
}

/// Runs on a dedicated pool of `threads` workers.
pub fn run_with_threads(command: Command, config: &RunConfig, threads: usize) -> Result<ResultEnvelope, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::runtime(format!("thread pool: {e}")))?;
    pool.install(|| run(command, config))
}

type Files = BTreeMap<String, String>;

fn average(ctx: &Context, files: &mut Files) -> Result<Value, CliError> {
    let p = ctx.potential()?;
    let opts = ctx.cfg.average.as_ref().expect("canonical");
    let n = opts.y_points;
    let lat = p.lattice();
    type Row = (f64, [f64; 2], f64);
    let rows: Vec<Result<Vec<Row>, CliError>> = opts
        .i1
        .par_iter()
        .map(|&i1| {
            let mut out = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    let y = lat.point(a as f64 / n as f64, b as f64 / n as f64);
                    out.push((i1, y, averaged_potential(p, i1, y)?));
                }
            }
            Ok(out)
        })
        .collect();
    let mut csv = String::from("I1,y1,y2,value\n");
    let mut summary = Vec::new();
    for r in rows {
        let r = r?;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(i1, y, v) in &r {
            let _ = writeln!(csv, "{i1:.16e},{:.16e},{:.16e},{v:.16e}", y[0], y[1]);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if let Some(&(i1, _, _)) = r.first() {
            summary.push(json!({ "I1": i1, "sample_min": lo, "sample_max": hi }));
        }
    }
    files.insert("average.csv".into(), csv);
    Ok(json!({ "y_points": n, "levels": summary }))
}

fn reeb(ctx: &Context) -> Result<Value, CliError> {
    let p = ctx.potential()?;
    let opts = ctx.cfg.reeb.as_ref().expect("canonical");
    let graphs: Vec<Result<_, CliError>> = opts
        .i1
        .par_iter()
        .map(|&i1| Ok(build_reeb_graph(&p.averaged(i1)?, &GraphOptions::default())?))
        .collect();
    let graphs = graphs.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(json!({ "graphs": to_value(&graphs)? }))
}

fn regimes(ctx: &Context, files: &mut Files) -> Result<Value, CliError> {
    let p = ctx.potential()?;
    let c = &ctx.cfg;
    let map = build_regimes(
        p,
        ctx.params.epsilon,
        c.i1_max.expect("canonical"),
        c.delta.expect("canonical"),
        c.grids.expect("canonical").regimes,
    )?;
    let mut csv = String::from("I1,E_min,E_minus,E_plus,E_max\n");
    for s in &map.curves {
        let _ = writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.i1, s.e_min, s.e_minus, s.e_plus, s.e_max
        );
    }
    files.insert("regimes.csv".into(), csv);
    to_value(&map)
}

fn actions(ctx: &Context, files: &mut Files) -> Result<Value, CliError> {
    let p = ctx.potential()?;
    let i1 = ctx.cfg.actions.expect("canonical").i1;
    let actx = Arc::new(ActionContext::new(p, ctx.params.epsilon, i1)?);
    let limits = actx.separatrix_limits()?;
    let ids: Vec<_> = actx.graph().edges.iter().map(|e| e.id).collect();
    let mut edges = Vec::new();
    for id in ids {
        let table = EdgeActionTable::build(actx.clone(), id)?;
        edges.push(json!({
            "edge": id,
            "energy_range": table.energy_range(),
            "action_range": table.action_range(),
            "interpolation_error": table.interpolation_error(),
        }));
        files.insert(format!("actions_{}.csv", id.label()), table.to_csv());
    }
    Ok(json!({ "I1": i1, "limits": to_value(&limits)?, "edges": edges }))
}

fn spectrum(ctx: &Context, files: &mut Files) -> Result<Value, CliError> {
    let p = ctx.potential()?;
    let (h, eps) = (ctx.params.h, ctx.params.epsilon);
    let (delta, i1_max) = (ctx.cfg.delta.expect("canonical"), ctx.cfg.i1_max.expect("canonical"));
    let mut bands_csv = String::from("mu,I1,E_min,E_max,width\n");
    if eps == 0.0 {
        // Every Landau band collapses to the point E = I₁^μ.
        let mut mu = 0u32;
        let mut levels = Vec::new();
        while landau_level(mu, h)? <= i1_max {
            let i1 = landau_level(mu, h)?;
            let _ = writeln!(bands_csv, "{mu},{i1:.16e},{i1:.16e},{i1:.16e},{:.16e}", 0.0);
            levels.push(i1);
            mu += 1;
        }
        files.insert("spectrum.csv".into(), "E_low,E_high,I1,regime,mu,nu\n".into());
        files.insert("landau_bands.csv".into(), bands_csv);
        return Ok(json!({ "degenerate": true, "landau_levels": levels }));
    }
    let spec = semiclassical_spectrum(p, eps, h, delta, i1_max)?;
    for b in &spec.bands {
        let _ = writeln!(
            bands_csv,
            "{},{:.16e},{:.16e},{:.16e},{:.16e}",
            b.mu, b.i1, b.e_min, b.e_max, b.width
        );
    }
    files.insert("spectrum.csv".into(), spec.to_csv());
    files.insert("landau_bands.csv".into(), bands_csv);
    let mut v = to_value(&spec)?;
    v["degenerate"] = json!(false);
    Ok(v)
}

fn harper_grid(ctx: &Context) -> (usize, usize) {
    let g = ctx.cfg.grids.expect("canonical").harper;
    (g[0], g[1])
}

fn bands(ctx: &Context, files: &mut Files) -> Result<Value, CliError> {
    let p = ctx.potential()?;
    let (h, eps) = (ctx.params.h, ctx.params.epsilon);
    let mu = ctx.cfg.bands.expect("canonical").mu;
    let flux = ctx.flux()?;
    let model = harper_from_landau(p, mu, h, eps)?;
    let table = band_table(&model, flux, harper_grid(ctx))?;
    let count = subband_count(p, eps, h, landau_level(mu, h)?, flux)?;
    files.insert("bands.csv".into(), table.to_csv());
    Ok(json!({
        "flux": flux.to_string(),
        "mu": mu,
        "band_count": table.band_count(),
        "table": to_value(&table)?,
        "subband_count": to_value(&count)?,
    }))
}

fn harper(ctx: &Context, files: &mut Files) -> Result<Value, CliError> {
    let p = ctx.potential()?;
    let opts = ctx.cfg.harper.as_ref().expect("canonical");
    let grid = harper_grid(ctx);
    let eps = ctx.params.epsilon;
    let fluxes = opts.fluxes.iter().map(|f| f.ratio()).collect::<Result<Vec<_>, _>>()?;
    let a22 = p.lattice().a22();
    let tables: Vec<Result<_, CliError>> = fluxes
        .par_iter()
        .map(|&flux| {
            let model = harper_from_landau(p, opts.mu, a22 / flux.value(), eps)?;
            Ok((flux, band_table(&model, flux, grid)?))
        })
        .collect();
    let mut csv = String::from("flux,band,E_minus,E_plus,lambda_minus,lambda_plus\n");
    let mut summary = Vec::new();
    for t in tables {
        let (flux, table) = t?;
        for line in table.to_csv().lines().skip(1) {
            let _ = writeln!(csv, "{flux},{line}");
        }
        summary.push(json!({
            "flux": flux.to_string(),
            "band_count": table.band_count(),
            "gaps": table.gaps(),
            "extent": table.extent(),
            "measure": table.measure(),
        }));
    }
    files.insert("harper.csv".into(), csv);
    Ok(json!({ "mu": opts.mu, "fluxes": summary }))
}

/// Fixed probe points for the pointwise boundary residual, in cell coordinates.
const BLOCH_PROBES: [(f64, f64); 4] = [(0.1, 0.2), (0.35, 0.7), (0.6, 0.45), (0.85, 0.9)];

fn bloch(ctx: &Context, files: &mut Files) -> Result<Value, CliError> {
    let p = ctx.potential()?;
    let opts = ctx.cfg.bloch.expect("canonical");
    let flux = ctx.flux()?;
    let lat = p.lattice();
    let q = QuasiMomentum::new(flux, opts.q1, opts.q2)?;
    let fam = boundary_family(flux, lat, q, opts.s, opts.window)?;
    let points: Vec<[f64; 2]> = BLOCH_PROBES.iter().map(|&(s, t)| lat.point(s, t)).collect();
    let report = verify_boundary_conditions(flux, lat, q, opts.s, opts.window, &points)?;
    let det = seed_gram_determinant(flux, lat, q);
    let mut csv = String::from("j,l1,l2,re,im\n");
    for r in fam.rows() {
        let _ = writeln!(csv, "{},{},{},{:.16e},{:.16e}", r.j, r.l1, r.l2, r.re, r.im);
    }
    files.insert("bloch_coefficients.csv".into(), csv);
    let crossings = match opts.crossings_i1 {
        Some(i1) => {
            let rep = dispersion_crossings(p, ctx.params.epsilon, i1, flux)?;
            files.insert("crossings.csv".into(), rep.to_csv());
            to_value(&rep)?
        }
        None => Value::Null,
    };
    Ok(json!({
        "flux": flux.to_string(),
        "q": to_value(&q)?,
        "s": opts.s,
        "residuals": to_value(&report)?,
        "max_residual": report.max(),
        "seed_gram_determinant": [det.re, det.im],
        "crossings": crossings,
    }))
}

fn sturm(ctx: &Context, files: &mut Files) -> Result<Value, CliError> {
    let opts = ctx.cfg.sturm.as_ref().expect("canonical");
    let v = opts.potential.build()?;
    let h = ctx.params.h;
    let bands = oracle_bands(&v, h, opts.grid, opts.levels, opts.q_samples)?;
    let bs = bs_levels_lower(&v, h)?;
    let top = bands.last().map(|b| b.e_plus).unwrap_or(v.v_max());
    let gaps = gap_ends_upper(&v, h, top)?;
    files.insert("band_structure.csv".into(), band_structure_csv(&v, h, &bands)?);
    files.insert("dispersion.csv".into(), dispersion_csv(&v, h, &bands));
    let edges: Vec<Value> = bands
        .iter()
        .map(|b| json!({ "nu": b.index, "E_minus": b.e_minus, "E_plus": b.e_plus }))
        .collect();
    Ok(json!({
        "h": h,
        "v_min": v.v_min(),
        "v_max": v.v_max(),
        "bohr_sommerfeld": bs,
        "gap_ends_upper": gaps,
        "bands": edges,
    }))
}

fn units(ctx: &Context) -> Result<Value, CliError> {
    match &ctx.cfg.physical {
        Some(ph) => to_value(&physical_to_dimensionless(&(*ph).into())?),
        None => Ok(json!({ "params": to_value(&ctx.params)? })),
    }
}
