//! Configuration ingestion, command dispatch and deterministic export.

// `!(x > 0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod error;
mod export;
mod run;

pub use config::{
    ActionsOptions, AverageOptions, BandsOptions, BlochOptions, CosineTerm, FluxSpec, FourierSeries1D, FourierTerm1D,
    Grids, HarperOptions, ParamsSpec, PhysicalSpec, Potential1DSpec, ReebOptions, RunConfig, SturmOptions,
    DEFAULT_DELTA, DEFAULT_I1_MAX, SCHEMA_VERSION,
};
pub use error::{CliError, ErrorKind};
pub use export::{export_plotdata, ENVELOPE_FILE};
pub use run::{run, run_with_threads, Accuracy, Command, ResultEnvelope};

/// JSON schema of [`RunConfig`].
pub const CONFIG_SCHEMA: &str = include_str!("../schema/config.schema.json");
