//! Action variables on the Reeb graph of the averaged drift Hamiltonian.
//!
//! Energies `g` are levels of the averaged potential v̄(I₁, ·); the physical
//! energy is E = I₁ + ε·g. On contractible edges I₂ is the flow-oriented
//! enclosed area over 2π. On open edges it is the signed trapezium area per
//! period between the orbit and the drift line through the origin, over 2π,
//! with the orbit lift fixed by the band {v̄ < g} that contains the minimum
//! point of the fundamental cell.

// `!(x > 0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod closed_form;
mod context;
mod error;
mod limits;
mod table;

pub use closed_form::{closed_form_from_ratio, closed_form_i2_example, legendre_chi2};
pub use context::{action_i2, ActionContext, ActionPoint};
pub use error::ActionsError;
pub use limits::{separatrix_limits, EdgeEnd, LimitFit, SeparatrixLimits};
pub use table::{energy_from_actions, EdgeActionTable, TABLE_NODES};
