// SPDX-License-Identifier: MIT OR Apache-2.0

//! Continuation in the aspect angle.

use serde::{Deserialize, Serialize};

use super::{check_phi, is_square, solve_seeded, SolverConfig};
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::system::{AspectProfile, RectangleSolution, TorusPoint4};

/// Branch links join solutions whose parameters differ by less than this
/// many angle steps.
const BRANCH_TOL_STEPS: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub phi: f64,
    pub solutions: Vec<RectangleSolution>,
    /// No solution was found at this angle, even after a retry.
    pub gap: bool,
}

/// Solution `from` of entry `step − 1` continues to solution `to` of entry
/// `step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchLink {
    pub step: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub entries: Vec<SweepEntry>,
    pub links: Vec<BranchLink>,
}

impl SweepResult {
    pub fn gaps(&self) -> impl Iterator<Item = &SweepEntry> {
        self.entries.iter().filter(|e| e.gap)
    }
}

/// Solves at `steps` equally spaced angles from `phi_lo` to `phi_hi`.
pub fn sweep(
    curve: &Curve,
    phi_lo: f64,
    phi_hi: f64,
    steps: usize,
    cfg: &SolverConfig,
) -> Result<SweepResult> {
    sweep_with(curve, phi_lo, phi_hi, steps, cfg, |_, _| {})
}

/// Like [`sweep`], calling `on_step` with each entry and its incoming links
/// as soon as the entry is complete.
pub fn sweep_with<F>(
    curve: &Curve,
    phi_lo: f64,
    phi_hi: f64,
    steps: usize,
    cfg: &SolverConfig,
    mut on_step: F,
) -> Result<SweepResult>
where
    F: FnMut(&SweepEntry, &[BranchLink]),
{
    check_phi(phi_lo)?;
    check_phi(phi_hi)?;
    if phi_lo >= phi_hi {
        return Err(Error::InvalidConfig(format!(
            "phi_lo must be below phi_hi, got [{phi_lo}, {phi_hi}]"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidConfig(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    let res = cfg.resolve(curve)?;
    let finer = cfg.with_pair_grid(2 * cfg.pair_grid).resolve(curve)?;
    let dphi = (phi_hi - phi_lo) / (steps - 1) as f64;
    let branch_tol = BRANCH_TOL_STEPS * dphi;

    let mut entries: Vec<SweepEntry> = Vec::with_capacity(steps);
    let mut links = Vec::new();
    for k in 0..steps {
        let phi = if k + 1 == steps {
            phi_hi
        } else {
            phi_lo + k as f64 * dphi
        };
        let profile = AspectProfile::constant(phi)?;
        let previous: Vec<TorusPoint4> = entries
            .last()
            .map(|e| e.solutions.iter().map(|s| s.params).collect())
            .unwrap_or_default();
        let solutions = match solve_seeded(curve, &profile, &res, &previous) {
            Err(Error::NoSolutionFound { .. }) => {
                match solve_seeded(curve, &profile, &finer, &previous) {
                    Err(Error::NoSolutionFound { .. }) => Vec::new(),
                    other => other?,
                }
            }
            other => other?,
        };
        let mut new_links = Vec::new();
        if let Some(prev) = entries.last() {
            for (i, a) in prev.solutions.iter().enumerate() {
                for (j, b) in solutions.iter().enumerate() {
                    let square = is_square(a.phi) || is_square(b.phi);
                    if a.params.orbit_distance(&b.params, square) < branch_tol {
                        new_links.push(BranchLink {
                            step: k,
                            from: i,
                            to: j,
                        });
                    }
                }
            }
        }
        let entry = SweepEntry {
            phi,
            gap: solutions.is_empty(),
            solutions,
        };
        on_step(&entry, &new_links);
        links.extend(new_links);
        entries.push(entry);
    }
    Ok(SweepResult { entries, links })
}
