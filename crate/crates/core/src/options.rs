use serde::{Deserialize, Serialize};

use crate::kinematics::RetardedOptions;
use crate::quadrature::AdaptiveOptions;

/// Numerical tolerances shared by the field evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative residual of the retarded-time condition.
    pub retarded: f64,
    /// Relative tolerance of the slowness integral (3D).
    pub kappa: f64,
    /// Relative tolerance of the history integrals (2D).
    pub history: f64,
    /// Characteristic length; the singular-point cutoff is 1e-9 of it.
    pub length_scale: f64,
    /// Gauss–Legendre nodes per panel.
    pub nodes: usize,
    pub max_panels: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { retarded: 1e-12, kappa: 1e-10, history: 1e-8, length_scale: 1.0, nodes: 16, max_panels: 400 }
    }
}

impl Tolerances {
    pub fn r_min(&self) -> f64 {
        1e-9 * self.length_scale
    }

    pub fn retarded_options(&self) -> RetardedOptions {
        RetardedOptions { tol: self.retarded, r_min: self.r_min(), max_iter: 200 }
    }

    pub fn kappa_options(&self) -> AdaptiveOptions {
        AdaptiveOptions { nodes: self.nodes, rel_tol: self.kappa, max_panels: self.max_panels }
    }

    pub fn history_options(&self) -> AdaptiveOptions {
        AdaptiveOptions { nodes: self.nodes, rel_tol: self.history, max_panels: self.max_panels }
    }
}
