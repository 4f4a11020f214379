//! Self-contained numerical kernels shared by the rest of the workspace.
//!
//! Everything here is a pure function of its inputs. The kernels are sized for
//! the small dense problems that appear in semiclassical spectral work: a few
//! hundred unknowns, smooth integrands, non-stiff planar vector fields.

// Index loops mirror the textbook matrix algorithms; `!(x > 0)` guards also reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

mod bessel;
mod eigen;
mod error;
mod interp;
mod linalg;
mod ode;
mod quad;
mod roots;
mod tolerance;

pub use bessel::{bessel_j0, bessel_j0_asymptotic, bessel_j0_series, bessel_j0_zero};
pub use eigen::{hermitian_eigen, hermitian_eigenvalues, symmetric_eigen, symmetric_eigenvalues, HermitianMatrix};
pub use error::NumericsError;
pub use interp::{chebyshev_nodes, MonotoneCubic};
pub use linalg::least_squares;
pub use ode::{integrate_ode, Dopri5, OdeSample, Trajectory};
pub use quad::{adaptive_quad, adaptive_quad_periodic};
pub use roots::{find_root, minimize_golden};
pub use tolerance::Tolerance;

pub use num_complex::Complex64;
