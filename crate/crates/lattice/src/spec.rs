//! JSON description of a potential.
//!
//! Either an explicit lattice with a coefficient list or the cosine shorthand:
//!
//! ```json
//! {"lattice": {"a21": 0.0, "a22": 6.283185307179586},
//!  "coefficients": [{"k1": 1, "k2": 0, "re": 0.5, "im": 0.0}, ...]}
//! {"cosine": {"A": 2.0, "B": 1.0, "beta": 1.0}}
//! ```

use crate::{cosine_example, FourierPotential, Lattice, LatticeError};
use magspec_numerics::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub a21: f64,
    pub a22: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    pub k1: i32,
    pub k2: i32,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosineSpec {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PotentialSpec {
    Cosine {
        cosine: CosineSpec,
    },
    Explicit {
        lattice: LatticeSpec,
        coefficients: Vec<CoefficientSpec>,
    },
}

impl PotentialSpec {
    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        serde_json::from_str(text).map_err(|e| LatticeError::Spec(e.to_string()))
    }

    /// Builds the potential; repeated (k1, k2) entries are summed.
    pub fn build(&self) -> Result<FourierPotential, LatticeError> {
        match self {
            PotentialSpec::Cosine { cosine } => cosine_example(cosine.a, cosine.b, cosine.beta),
            PotentialSpec::Explicit { lattice, coefficients } => {
                let lat = Lattice::new(lattice.a21, lattice.a22)?;
                let mut map = BTreeMap::new();
                for c in coefficients {
                    *map.entry((c.k1, c.k2)).or_insert(Complex64::new(0.0, 0.0)) += Complex64::new(c.re, c.im);
                }
                FourierPotential::new(lat, map)
            }
        }
    }
}
