// SPDX-License-Identifier: MIT OR Apache-2.0

use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::system::{ACCEPT_TOL_REL, R_MIN_REL, SNAP_TOL_REL};

/// Search and refinement settings. Scale-dependent fields left as `None`
/// are derived from the curve diameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Samples per circle factor for pair enumeration.
    pub pair_grid: usize,
    /// Midpoint bin width; `2·diameter/pair_grid` when unset.
    pub bin_size: Option<f64>,
    /// Seed acceptance slack on the diagonal angle, radians.
    pub angle_slack: f64,
    /// Relative slack on the diagonal lengths.
    pub length_slack: f64,
    pub max_iter: usize,
    /// Residual max-norm acceptance; `1e-10·diameter` when unset.
    pub accept_tol: Option<f64>,
    /// Minimum half-diagonal; `1e-6·diameter` when unset.
    pub r_min: Option<f64>,
    /// Per-iteration clamp on the parameter step (max-norm), radians.
    pub max_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            pair_grid: 256,
            bin_size: None,
            angle_slack: 0.15,
            length_slack: 0.1,
            max_iter: 50,
            accept_tol: None,
            r_min: None,
            max_step: 0.5,
        }
    }
}

/// A [`SolverConfig`] with every scale-dependent field filled in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolved {
    pub pair_grid: usize,
    pub bin_size: f64,
    pub angle_slack: f64,
    pub length_slack: f64,
    pub max_iter: usize,
    pub accept_tol: f64,
    pub r_min: f64,
    pub max_step: f64,
    pub snap_tol: f64,
    pub diameter: f64,
}

impl SolverConfig {
    pub fn with_pair_grid(&self, pair_grid: usize) -> Self {
        SolverConfig {
            pair_grid,
            ..self.clone()
        }
    }

    pub fn resolve(&self, curve: &Curve) -> Result<Resolved> {
        if self.pair_grid < 32 {
            return Err(Error::InvalidConfig(format!(
                "pair_grid must be at least 32, got {}",
                self.pair_grid
            )));
        }
        let nonneg = |name: &str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "{name} must be non-negative, got {v}"
                )))
            }
        };
        nonneg("angle_slack", self.angle_slack)?;
        nonneg("length_slack", self.length_slack)?;
        if self.max_step.is_nan() || self.max_step <= 0.0 {
            return Err(Error::InvalidConfig("max_step must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be positive".into()));
        }
        let diameter = curve.diameter();
        let resolved = Resolved {
            pair_grid: self.pair_grid,
            bin_size: self
                .bin_size
                .unwrap_or(2.0 * diameter / self.pair_grid as f64),
            angle_slack: self.angle_slack,
            length_slack: self.length_slack,
            max_iter: self.max_iter,
            accept_tol: self.accept_tol.unwrap_or(ACCEPT_TOL_REL * diameter),
            r_min: self.r_min.unwrap_or(R_MIN_REL * diameter),
            max_step: self.max_step,
            snap_tol: SNAP_TOL_REL * diameter,
            diameter,
        };
        for (name, v) in [
            ("bin_size", resolved.bin_size),
            ("accept_tol", resolved.accept_tol),
            ("r_min", resolved.r_min),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(resolved)
    }
}
