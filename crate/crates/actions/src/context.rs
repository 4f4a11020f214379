use crate::ActionsError;
use magspec_classical::{
    build_reeb_graph, trace_orbit, DriftSystem, EdgeId, GraphKind, Orbit, OrbitOptions, OrbitOutcome, ReebGraph,
    ReebOptions,
};
use magspec_lattice::{AveragedPotential, FourierPotential, Lattice};
use magspec_numerics::{find_root, Tolerance};
use serde::Serialize;
use std::f64::consts::PI;

/// A point (I₁, I₂) on a Reeb edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionPoint {
    pub i1: f64,
    pub i2: f64,
    pub edge: EdgeId,
}

/// Levels closer than this fraction of g_max − g_min to a saddle value are
/// rejected.
const PROXIMITY: f64 = 1e-10;
const RAY_STEPS: usize = 400;
/// Smallest ray step as a fraction of the cell diameter.
const MIN_RAY_STEP: f64 = 1e-7;

/// Everything needed to evaluate actions at one cyclotron action I₁.
#[derive(Debug, Clone)]
pub struct ActionContext {
    eps: f64,
    sys: DriftSystem,
    graph: ReebGraph,
    orbit: OrbitOptions,
}

impl ActionContext {
    pub fn new(p: &FourierPotential, eps: f64, i1: f64) -> Result<Self, ActionsError> {
        Self::with_options(p, eps, i1, &ReebOptions::default(), OrbitOptions::default())
    }

    pub fn with_options(
        p: &FourierPotential,
        eps: f64,
        i1: f64,
        reeb: &ReebOptions,
        orbit: OrbitOptions,
    ) -> Result<Self, ActionsError> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(ActionsError::Domain(format!(
                "epsilon must be finite and non-negative, got {eps}"
            )));
        }
        let av = p.averaged(i1)?;
        let graph = build_reeb_graph(&av, reeb)?;
        // Actions are ε-free; orbits are traced in unit time.
        let sys = DriftSystem::from_averaged(av, 1.0);
        Ok(Self { eps, sys, graph, orbit })
    }

    pub fn i1(&self) -> f64 {
        self.graph.i1
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn graph(&self) -> &ReebGraph {
        &self.graph
    }

    pub fn averaged(&self) -> &AveragedPotential {
        self.sys.averaged()
    }

    pub fn lattice(&self) -> &Lattice {
        self.sys.averaged().lattice()
    }

    /// a₁₁·a₂₂/(2π): the cell area over 2π.
    pub fn cell_action(&self) -> f64 {
        self.lattice().cell_area() / (2.0 * PI)
    }

    /// E = I₁ + ε·g.
    pub fn energy(&self, g: f64) -> f64 {
        self.i1() + self.eps * g
    }

    pub fn action_point(&self, edge: EdgeId, g: f64) -> Result<ActionPoint, ActionsError> {
        Ok(ActionPoint {
            i1: self.i1(),
            i2: self.action(edge, g)?,
            edge,
        })
    }

    /// I₂ on `edge` at level g.
    pub fn action(&self, edge: EdgeId, g: f64) -> Result<f64, ActionsError> {
        Ok(self.orbit_on(edge, g)?.1)
    }

    /// The orbit used for I₂ on `edge` at level g, and the action.
    pub fn orbit_on(&self, edge: EdgeId, g: f64) -> Result<(Orbit, f64), ActionsError> {
        let e = self.graph.edge(edge).ok_or_else(|| {
            ActionsError::Domain(format!(
                "edge {} is absent from the {:?} graph",
                edge.label(),
                self.graph.kind
            ))
        })?;
        let (lo, hi) = e.energy_range;
        if !(g > lo && g < hi) {
            return Err(ActionsError::Domain(format!(
                "g = {g} is outside the energy range ({lo}, {hi}) of edge {}",
                edge.label()
            )));
        }
        let span = self.graph.g_max - self.graph.g_min;
        let saddles: &[f64] = match self.graph.kind {
            GraphKind::DegenerateTypeII => &[],
            _ => &[self.graph.g_minus, self.graph.g_plus],
        };
        for &s in saddles {
            if (g - s).abs() < PROXIMITY * span {
                return Err(ActionsError::SeparatrixProximity {
                    g,
                    critical: s,
                    distance: (g - s).abs(),
                });
            }
        }
        match edge {
            EdgeId::I1 | EdgeId::I4 => {
                let y0 = self.contractible_start(edge, g)?;
                let orbit = self.closed_orbit(y0)?;
                if orbit.winding != (0, 0) {
                    return Err(ActionsError::Trajectory(format!(
                        "orbit on contractible edge {} has winding {:?}",
                        edge.label(),
                        orbit.winding
                    )));
                }
                let i2 = orbit.area / (2.0 * PI);
                Ok((orbit, i2))
            }
            EdgeId::I2 | EdgeId::I3 => self.open_orbit(edge, g),
        }
    }

    fn closed_orbit(&self, y0: [f64; 2]) -> Result<Orbit, ActionsError> {
        match trace_orbit(&self.sys, y0, &self.orbit)? {
            OrbitOutcome::Closed(o) => Ok(o),
            OrbitOutcome::FixedPoint => Err(ActionsError::Trajectory(format!("start point {y0:?} is a fixed point"))),
            OrbitOutcome::CapExceeded { .. } => Err(ActionsError::Trajectory(format!(
                "orbit from {y0:?} did not close within the period cap"
            ))),
        }
    }

    /// First point with v̄ = g on the ray from the extremum towards the
    /// nearest lift of the opposite extremum.
    fn contractible_start(&self, edge: EdgeId, g: f64) -> Result<[f64; 2], ActionsError> {
        let (from, to) = match edge {
            EdgeId::I1 => (self.graph.y_min, self.graph.y_max),
            _ => (self.graph.y_max, self.graph.y_min),
        };
        let (from, to) = match (from, to) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(ActionsError::DegenerateGraph("extremum locations unavailable".into())),
        };
        let target = self.nearest_lift(from, to);
        let dir = [target[0] - from[0], target[1] - from[1]];
        let len = dir[0].hypot(dir[1]);
        let unit = [dir[0] / len, dir[1] / len];
        let sign = if edge == EdgeId::I1 { 1.0 } else { -1.0 };
        self.ray_crossing(from, unit, len, g, sign)
    }

    fn nearest_lift(&self, from: [f64; 2], to: [f64; 2]) -> [f64; 2] {
        let l = self.lattice();
        let (s, t) = l.coords([to[0] - from[0], to[1] - from[1]]);
        let mut best = to;
        let mut best_d = f64::INFINITY;
        for ds in -1..=1 {
            for dt in -1..=1 {
                let n = ((-s.round() as i64) + ds, (-t.round() as i64) + dt);
                let shift = l.vector(n);
                let cand = [to[0] + shift[0], to[1] + shift[1]];
                let d = (cand[0] - from[0]).hypot(cand[1] - from[1]);
                if d < best_d {
                    best_d = d;
                    best = cand;
                }
            }
        }
        best
    }

    /// First root of sign·(v̄(from + s·unit) − g) on (0, len], where the
    /// expression is negative at s = 0. Steps of |φ|/L with L ≥ |∇v̄| cannot
    /// pass a root, so close pairs of crossings near a saddle are resolved.
    fn ray_crossing(
        &self,
        from: [f64; 2],
        unit: [f64; 2],
        len: f64,
        g: f64,
        sign: f64,
    ) -> Result<[f64; 2], ActionsError> {
        let av = self.averaged();
        let f = |s: f64| sign * (av.value([from[0] + s * unit[0], from[1] + s * unit[1]]) - g);
        let lip = self.sys.grad_scale();
        let diam = self.sys.cell_diameter();
        let (max_step, min_step) = (diam / RAY_STEPS as f64, MIN_RAY_STEP * diam);
        let mut prev = (0.0, f(0.0));
        if prev.1 >= 0.0 {
            return Err(ActionsError::Domain(format!(
                "level g = {g} does not enclose the ray origin"
            )));
        }
        while prev.0 < len {
            let step = (-prev.1 / lip).clamp(min_step, max_step);
            let s = (prev.0 + step).min(len);
            let cur = (s, f(s));
            if cur.1 >= 0.0 {
                let root = if cur.1 == 0.0 {
                    s
                } else {
                    find_root(f, prev.0, cur.0, Tolerance::new(1e-15, 1e-15, 500)?)?
                };
                return Ok([from[0] + root * unit[0], from[1] + root * unit[1]]);
            }
            prev = cur;
        }
        Err(ActionsError::Domain(format!(
            "no crossing of level g = {g} along the ray"
        )))
    }

    fn open_orbit(&self, edge: EdgeId, g: f64) -> Result<(Orbit, f64), ActionsError> {
        if self.graph.kind != GraphKind::Generic {
            return Err(ActionsError::DegenerateGraph(format!(
                "open-edge actions need a generic graph, found {:?}",
                self.graph.kind
            )));
        }
        let d = self
            .graph
            .drift()
            .map(|x| x.d)
            .ok_or_else(|| ActionsError::DegenerateGraph("no drift vector".into()))?;
        let want = if edge == EdgeId::I2 { d } else { (-d.0, -d.1) };
        let y_min = self
            .graph
            .y_min
            .ok_or_else(|| ActionsError::DegenerateGraph("minimum unavailable".into()))?;
        let big_d = self.lattice().vector(d);
        let dn = big_d[0].hypot(big_d[1]);
        let normal = [-big_d[1] / dn, big_d[0] / dn];
        let reach = 4.0 * self.lattice().cell_area() / dn + self.sys.cell_diameter();
        // The band's −d boundary lies on the +normal side.
        let order = if edge == EdgeId::I2 { [-1.0, 1.0] } else { [1.0, -1.0] };
        let mut seen = Vec::new();
        for side in order {
            let unit = [side * normal[0], side * normal[1]];
            let y0 = self.ray_crossing(y_min, unit, reach, g, 1.0)?;
            let orbit = self.closed_orbit(y0)?;
            if orbit.winding == want {
                let dd = self.lattice().vector(orbit.winding);
                let i2 = (orbit.area - orbit.start[1] * dd[0] - 0.5 * dd[0] * dd[1]) / (2.0 * PI);
                return Ok((orbit, i2));
            }
            seen.push(orbit.winding);
        }
        Err(ActionsError::Trajectory(format!(
            "no band boundary with winding {want:?} at g = {g}; found {seen:?}"
        )))
    }
}

/// I₂ on `edge` at level g for the averaged Hamiltonian at I₁.
pub fn action_i2(p: &FourierPotential, eps: f64, i1: f64, g: f64, edge: EdgeId) -> Result<f64, ActionsError> {
    ActionContext::new(p, eps, i1)?.action(edge, g)
}
