// SPDX-License-Identifier: MIT OR Apache-2.0

use nalgebra::Vector4;

use super::config::Resolved;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::system::{
    jacobian_from_chords, max_abs, rectangle_from_params_with, residual_from_points, AspectProfile,
    Chords, RectangleSolution, TorusPoint4,
};

/// Singular values below this fraction of the largest are dropped from the
/// pseudoinverse.
const RANK_CUTOFF: f64 = 1e-8;
/// A converged root whose Jacobian has `σ_min < FAMILY_RATIO·σ_max` lies on
/// a continuous family of roots.
const FAMILY_RATIO: f64 = 1e-6;
const MAX_HALVINGS: usize = 12;
/// Extra Newton steps taken after the acceptance tolerance is met.
const POLISH_STEPS: usize = 2;

pub(crate) struct Refined {
    pub solution: RectangleSolution,
    pub on_family: bool,
}

fn norm2(f: &[f64; 4]) -> f64 {
    f.iter().map(|x| x * x).sum::<f64>().sqrt()
}

struct State {
    u: TorusPoint4,
    chords: Chords,
    f: [f64; 4],
}

impl State {
    fn at(curve: &Curve, u: TorusPoint4, profile: &AspectProfile) -> Result<State> {
        let chords = Chords::at(curve, &u);
        let f = residual_from_points(&chords.pts, profile)?;
        Ok(State { u, chords, f })
    }
}

/// Damped Gauss–Newton on the torus with a minimum-norm pseudoinverse step.
pub(crate) fn refine_root(
    curve: &Curve,
    seed: TorusPoint4,
    profile: &AspectProfile,
    cfg: &Resolved,
) -> Result<Refined> {
    let mut state = State::at(curve, seed, profile)?;
    let mut polish = 0;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        if max_abs(&state.f) <= cfg.accept_tol {
            if polish == POLISH_STEPS {
                break;
            }
            polish += 1;
        }
        iterations += 1;
        let jac = jacobian_from_chords(&state.chords, profile)?;
        let svd = jac.svd(true, true);
        let cutoff = RANK_CUTOFF * svd.singular_values.max();
        let rhs = Vector4::from(state.f);
        let Ok(delta) = svd.solve(&rhs, cutoff) else {
            break;
        };
        let mut step = -delta;
        let largest = step.amax();
        if !largest.is_finite() {
            break;
        }
        if largest > cfg.max_step {
            step *= cfg.max_step / largest;
        }
        let current = norm2(&state.f);
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let base = state.u.to_array();
            let trial = TorusPoint4::from([
                base[0] + alpha * step[0],
                base[1] + alpha * step[1],
                base[2] + alpha * step[2],
                base[3] + alpha * step[3],
            ]);
            let next = State::at(curve, trial, profile)?;
            if norm2(&next.f) < current {
                accepted = Some(next);
                break;
            }
            alpha *= 0.5;
        }
        match accepted {
            Some(next) => state = next,
            None => break,
        }
    }

    let residual = max_abs(&state.f);
    if residual > cfg.accept_tol {
        return Err(Error::NotConverged {
            residual,
            iterations,
        });
    }
    let half_diag = (state.chords.pts[2] - state.chords.pts[3]).norm() / 2.0;
    if half_diag < cfg.r_min {
        return Err(Error::ConvergedDegenerate { half_diag });
    }
    let solution = rectangle_from_params_with(curve, &state.u, profile, cfg.accept_tol, cfg.r_min)?;
    let sv = jacobian_from_chords(&state.chords, profile)?.singular_values();
    let on_family = sv.min() < FAMILY_RATIO * sv.max();
    Ok(Refined {
        solution,
        on_family,
    })
}
