//! Error classification into exit codes.

use magspec_actions::ActionsError;
use magspec_bloch::BlochError;
use magspec_classical::ClassicalError;
use magspec_harper::HarperError;
use magspec_lattice::LatticeError;
use magspec_numerics::NumericsError;
use magspec_spectra::SpectraError;
use magspec_sturm1d::Sturm1dError;
use serde::Serialize;
use thiserror::Error;

/// Failure class; each maps to a distinct process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Runtime,
    Config,
    UnsupportedTopology,
    Convergence,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Runtime => 1,
            ErrorKind::Config => 2,
            ErrorKind::UnsupportedTopology => 3,
            ErrorKind::Convergence => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error, Serialize)]
#[error("{kind:?}: {message}")]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Config, message)
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Runtime, message)
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    /// Single-line JSON `{"error":{"code":..,"kind":..,"message":..}}`.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": { "code": self.exit_code(), "kind": self.kind, "message": self.message }
        })
        .to_string()
    }
}

fn numerics_kind(e: &NumericsError) -> ErrorKind {
    match e {
        NumericsError::Domain(_) => ErrorKind::Config,
        NumericsError::Bracket { .. } | NumericsError::Convergence { .. } | NumericsError::StepUnderflow { .. } => {
            ErrorKind::Convergence
        }
        NumericsError::NotHermitian { .. } => ErrorKind::Runtime,
    }
}

fn lattice_kind(e: &LatticeError) -> ErrorKind {
    match e {
        LatticeError::Numerics(n) => numerics_kind(n),
        LatticeError::Domain(_) | LatticeError::InvalidPotential(_) | LatticeError::Spec(_) => ErrorKind::Config,
    }
}

fn classical_kind(e: &ClassicalError) -> ErrorKind {
    match e {
        ClassicalError::Lattice(l) => lattice_kind(l),
        ClassicalError::Numerics(n) => numerics_kind(n),
        ClassicalError::Domain(_) | ClassicalError::SeparatrixProximity { .. } => ErrorKind::Config,
        ClassicalError::UnsupportedTopology { .. } => ErrorKind::UnsupportedTopology,
        ClassicalError::IncompleteSearch(_) | ClassicalError::Tracing(_) => ErrorKind::Convergence,
    }
}

fn actions_kind(e: &ActionsError) -> ErrorKind {
    match e {
        ActionsError::Classical(c) => classical_kind(c),
        ActionsError::Lattice(l) => lattice_kind(l),
        ActionsError::Numerics(n) => numerics_kind(n),
        ActionsError::Domain(_) | ActionsError::SeparatrixProximity { .. } => ErrorKind::Config,
        ActionsError::DegenerateGraph(_) => ErrorKind::UnsupportedTopology,
        ActionsError::Trajectory(_) => ErrorKind::Convergence,
    }
}

fn spectra_kind(e: &SpectraError) -> ErrorKind {
    match e {
        SpectraError::Actions(a) => actions_kind(a),
        SpectraError::Classical(c) => classical_kind(c),
        SpectraError::Lattice(l) => lattice_kind(l),
        SpectraError::Numerics(n) => numerics_kind(n),
        SpectraError::Domain(_) => ErrorKind::Config,
        SpectraError::Resonance { .. } | SpectraError::SubbandMismatch { .. } | SpectraError::Kirchhoff { .. } => {
            ErrorKind::Convergence
        }
    }
}

fn bloch_kind(e: &BlochError) -> ErrorKind {
    match e {
        BlochError::Actions(a) => actions_kind(a),
        BlochError::Numerics(n) => numerics_kind(n),
        BlochError::Domain(_) => ErrorKind::Config,
        BlochError::UnsupportedDrift { .. } => ErrorKind::UnsupportedTopology,
    }
}

fn harper_kind(e: &HarperError) -> ErrorKind {
    match e {
        HarperError::Lattice(l) => lattice_kind(l),
        HarperError::Numerics(n) => numerics_kind(n),
        HarperError::Domain(_) | HarperError::Incommensurate { .. } => ErrorKind::Config,
    }
}

fn sturm_kind(e: &Sturm1dError) -> ErrorKind {
    match e {
        Sturm1dError::Numerics(n) => numerics_kind(n),
        Sturm1dError::Domain(_) => ErrorKind::Config,
        Sturm1dError::Unsupported(_) => ErrorKind::UnsupportedTopology,
        Sturm1dError::Conditioning { .. } => ErrorKind::Convergence,
    }
}

macro_rules! classify {
    ($($ty:ty => $f:ident),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::new($f(&e), e.to_string())
            }
        })*
    };
}

classify! {
    NumericsError => numerics_kind,
    LatticeError => lattice_kind,
    ClassicalError => classical_kind,
    ActionsError => actions_kind,
    SpectraError => spectra_kind,
    BlochError => bloch_kind,
    HarperError => harper_kind,
    Sturm1dError => sturm_kind,
}
