use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, ModelError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("incomplete parametrization: {0}")]
    IncompleteParametrization(String),
    #[error("inconsistent parametrization: {0}")]
    InconsistentParametrization(String),
    #[error("outside model validity: {0}")]
    ModelValidity(String),
    #[error("empty basis: no admissible photon numbers for sector {sector}")]
    EmptyBasis { sector: f64 },
    #[error(
        "labeling failed: states {first} and {second} remain ambiguous after {steps} ramp steps"
    )]
    Labeling {
        first: usize,
        second: usize,
        steps: usize,
    },
    #[error(
        "degenerate perturbation theory: denominator {denominator:e} erg for coupled state {state}"
    )]
    DegeneratePerturbation { state: usize, denominator: f64 },
    #[error("validity guard: {0}")]
    Guard(Warning),
}

/// Regime warnings. The formulas stay defined, their assumptions do not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Photon occupation below the intensive-wave threshold.
    LowOccupation { n0: f64, threshold: f64 },
    /// Rotation momentum p0/mc above the small-parameter bound.
    FastRotation { ratio: f64, bound: f64 },
    /// Second-order correction comparable to the level spacing.
    LargeCorrection { ratio: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::LowOccupation { n0, threshold } => {
                write!(
                    f,
                    "photon occupation N0 = {n0} below intensive threshold {threshold}"
                )
            }
            Warning::FastRotation { ratio, bound } => {
                write!(f, "p0/mc = {ratio:e} exceeds {bound:e}")
            }
            Warning::LargeCorrection { ratio } => {
                write!(
                    f,
                    "second-order correction is {ratio:.3} of the level spacing"
                )
            }
        }
    }
}

/// Promotes the first warning to an error when `strict` is set.
pub fn enforce(warnings: &[Warning], strict: bool) -> Result<()> {
    match warnings.first() {
        Some(w) if strict => Err(ModelError::Guard(w.clone())),
        _ => Ok(()),
    }
}
