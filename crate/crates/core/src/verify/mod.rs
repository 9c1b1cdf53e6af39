//! Independent oracles and the self-check suite.
//!
//! The oracles do not share code paths with the field evaluators beyond the
//! trajectory and force descriptions: finite differences of the displacement,
//! the residual of the equation of motion, a time convolution with a smoothed
//! Green tensor, and superposition of point forces along a line.

pub mod cases;
mod fd;
mod mollified;
mod navier;
mod suite;
mod superposition;

use serde::{Deserialize, Serialize};

pub use fd::{fd_consistency, fd_step, front_distance, rel_err, FdEstimate};
pub use mollified::{convergence_order, mollified_convolution_u, mollified_green};
pub use navier::{navier_residual, NavierResidual};
pub use suite::{check_names, run_check_suite, SuiteConfig, SuiteSource};
pub use superposition::line_superposition_u;

/// Error of one sample of a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub label: String,
    pub rel_err: f64,
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub n_samples: usize,
    #[serde(skip)]
    pub details: Vec<SampleRecord>,
}

impl CheckReport {
    /// Builds the report; errors that are NaN count as infinite.
    pub fn from_samples(name: &str, tolerance: f64, details: Vec<SampleRecord>) -> Self {
        let max_rel_err = details
            .iter()
            .map(|s| if s.rel_err.is_nan() { f64::INFINITY } else { s.rel_err })
            .fold(0.0, f64::max);
        Self {
            name: name.to_string(),
            max_rel_err,
            tolerance,
            pass: max_rel_err <= tolerance,
            n_samples: details.len(),
            details,
        }
    }
}
