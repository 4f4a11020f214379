//! Lattice geometry, lattice-periodic potentials and their cyclotron average.
//!
//! Potentials are finite trigonometric polynomials indexed by the dual
//! lattice. The averaged potential replaces each mode by its Bessel-damped
//! value, which is the angular mean over a cyclotron circle of radius √(2I₁).

// `!(x > 0)` guards also reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

mod error;
mod flux;
mod lattice;
mod params;
mod potential;
mod spec;

pub use error::LatticeError;
pub use flux::{flux_ratio, Flux, FluxRatio};
pub use lattice::Lattice;
pub use params::{physical_to_dimensionless, DimensionlessParams, PhysicalParams, SpectralParams};
pub use potential::{
    averaged_potential, averaged_potential_oracle, cosine_example, AveragedPotential, CosineParams, FourierPotential,
    Mode,
};
pub use spec::{CoefficientSpec, CosineSpec, LatticeSpec, PotentialSpec};
