//! Guiding-center drift governed by the averaged Hamiltonian
//! H̄(I₁, y) = I₁ + ε·v̄(I₁, y) at fixed cyclotron action I₁.
//!
//! Energies of level sets and critical points are reported as v̄-levels `g`;
//! the corresponding energy is E = I₁ + ε·g.

// `!(x > 0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod critical;
mod drift;
mod error;
mod levelset;
mod orbit;
mod reeb;
mod regimes;
mod series;

pub use critical::{find_critical_points, CriticalKind, CriticalPoint, CriticalPointSet};
pub use drift::{conjugate_vector, drift_field, DriftData, DriftSystem};
pub use error::ClassicalError;
pub use levelset::{trace_level_set, LevelSetComponent, LevelSetOptions};
pub use orbit::{
    classify_trajectory, lifted_hamiltonian_oscillation, trace_orbit, Classification, Orbit, OrbitOptions,
    OrbitOutcome, OrbitSample,
};
pub use reeb::{build_reeb_graph, EdgeId, GraphKind, ReebEdge, ReebGraph, ReebOptions, ReebVertex};
pub use regimes::{build_regimes, BoundarySample, Regime, RegimeKind, RegimeMap};
pub use series::{critical_i1_series, CriticalSeries};
