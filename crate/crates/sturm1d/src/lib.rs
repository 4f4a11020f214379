//! One-dimensional periodic Schrödinger operator −h²d²/dx² + v(x) with Bloch
//! condition Ψ(x + 2π) = e^{2πiq}Ψ(x): semiclassical band formulas, a
//! finite-difference reference oracle, the two-function energy-difference
//! formula, harmonic quasimodes, the Reeb graph of p² + v, and the Weyl count.

// `!(x > 0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
mod export;
mod lifshits;
mod oracle;
mod potential;
mod quasimode;
mod reeb;
pub mod semiclassics;

pub use error::Sturm1dError;
pub use export::{band_structure_csv, dispersion_csv, dispersion_formula};
pub use lifshits::{bloch_extend, lifshits_difference, OVERLAP_FLOOR};
pub use oracle::{
    fd_band_width, fd_bloch_oracle, fd_real_eigenpairs, fourier_bloch_oracle, oracle_bands, BlochBand1D, FdOperator,
    OracleBandWidth, MIN_GRID,
};
pub use potential::Potential1D;
pub use quasimode::{harmonic_quasimode_residual, hermite, quasimode_distance_check, QuasimodeReport};
pub use reeb::{reeb_1d, Reeb1D, ReebEdge1D};
pub use semiclassics::{
    action_lower, action_upper, agmon_distance, band_width_lower, bs_levels_lower, classical_frequency,
    dispersion_upper, gap_ends_upper, lower_dispersion_shape, turning_points, upper_band_action, weyl_count_1d,
    LowerBandWidth, WeylCount,
};
