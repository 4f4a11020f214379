//! Semiclassical spectra from Bohr–Sommerfeld quantization of the drift
//! regimes, plus the homological-equation solver and the first-order
//! generating-function diagnostic.

// `!(x > 0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
mod generating;
mod homological;
mod levels;
mod quantize;
mod spectrum;
mod subband;

pub use error::SpectraError;
pub use generating::{first_order_generating_residual, generating_function};
pub use homological::{solve_homological, FourierFunctionOnTorus, HomologicalSolution};
pub use levels::{landau_level, maslov_indices, quantization_shift, ManifoldKind};
pub use quantize::{
    quantize_boundary, quantize_interior, regime_tables, ActionValue, QuantizedState, RegimeTable, SeriesKind,
    SpectralSeries, ACCURACY_TAG,
};
pub use spectrum::{semiclassical_spectrum, LandauBand, SemiclassicalSpectrum};
pub use subband::{subband_count, SubbandCount};
