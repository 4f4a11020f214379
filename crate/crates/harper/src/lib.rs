//! Harper-type difference operators for one Landau band.
//!
//! Quantizing v̄(I₁^μ, y) with y₁ → −ih∂/∂y₂ (Weyl order) gives a difference
//! operator in y₂. For flux η = N/M the shift h is M/N of the y₂ period, so
//! Floquet reduction gives N×N Hermitian matrices and N bands.

// `!(x > 0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod bands;
mod error;
mod matrix;
mod model;

pub use bands::{
    band_table, butterfly_csv, general_band_table, BandTable, HarperBand, DEFAULT_GRID, GAP_FLOOR, MAX_FLUX_NUMERATOR,
};
pub use error::HarperError;
pub use matrix::{bloch_matrix, general_symbol_matrix};
pub use model::{harper_from_landau, HarperModel};
