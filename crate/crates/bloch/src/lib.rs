//! Magneto-Bloch coefficient families for rational flux η = N/M.
//!
//! Quasimodes are superpositions of magnetic translates. With
//! S_l ψ(x) = ψ(x − l·a)·e^{−(i/h)(l·a)₂x₁} one has
//! S_l S_m = e^{(i/h)(l·a)₁(m·a)₂} S_{l+m}, so every magneto-Bloch condition
//! reduces to a recurrence between coefficients. All checks here are on
//! those recurrences, plus a pointwise check with an explicit Gaussian
//! profile for boundary families.

// `!(x > 0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod algebra;
mod boundary;
mod crossings;
mod error;
mod general;
mod interior;
mod quasi;

pub use algebra::CylinderAlgebra;
pub use boundary::{
    boundary_bloch_coeff, boundary_family, family_gram_offdiagonal, seed_gram_determinant, verify_boundary_conditions,
    BoundaryBlochFamily, BoundaryResidualReport, CoefficientRow,
};
pub use crossings::{dispersion_crossings, CrossingReport, DispersionCrossing};
pub use error::BlochError;
pub use general::{general_quantized_i2, interior_general_d_solve, GeneralDSolution};
pub use interior::{interior_bloch_coeffs, interior_i2, verify_interior_recurrences, InteriorBlochFamily, Sign};
pub use quasi::{degeneracy_counts, QuasiMomentum};
