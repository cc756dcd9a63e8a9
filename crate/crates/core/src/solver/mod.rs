// SPDX-License-Identifier: MIT OR Apache-2.0

//! Global search for inscribed rectangles.
//!
//! Seeds come from midpoint pairing on a parameter grid. Each seed is refined
//! by damped Gauss–Newton, the roots are canonicalized, and duplicates are
//! merged. Symmetric curves carry whole families of roots (every rotation
//! of a square inscribed in a circle is another one); roots on such a family
//! are merged with their neighbours so that a family is reported once.

mod config;
mod oracle;
mod refine;
mod seed;
mod sweep;

use std::f64::consts::{FRAC_PI_2, TAU};

use rayon::prelude::*;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::system::{
    canonical_with, same_rectangle, verify_rectangle, AspectProfile, RectangleSolution, TorusPoint4,
};

pub use config::{Resolved, SolverConfig};
pub use oracle::{grid_step, nearest_hit_distance, oracle_clusters, oracle_solve, OracleHit};
pub use sweep::{sweep, sweep_with, BranchLink, SweepEntry, SweepResult};

/// Geometric tolerance every returned solution is checked against.
pub const VERIFY_TOL: f64 = 1e-8;
/// Roots on a family are merged when some relabeling lies within this many
/// grid steps of another family root.
const FAMILY_LINK_STEPS: f64 = 8.0;
/// Profile domain margin beyond the curve diameter checked by the porism.
const PORISM_DOMAIN_MARGIN: f64 = 1.05;
/// Angles within this distance of `π/2` allow the chord-exchange relabeling.
const SQUARE_EPS: f64 = 1e-12;

pub(crate) fn is_square(phi: f64) -> bool {
    (phi - FRAC_PI_2).abs() <= SQUARE_EPS
}

/// Rejects diagonal angles outside `(0, π/2]`.
pub fn check_phi(phi: f64) -> Result<()> {
    if phi.is_finite() && phi > 0.0 && phi <= FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "phi must lie in (0, pi/2], got {phi}"
        )))
    }
}

/// Raw seeds for angle `phi`, before thinning, in enumeration order.
pub fn seed_candidates(curve: &Curve, phi: f64, cfg: &SolverConfig) -> Result<Vec<TorusPoint4>> {
    let res = cfg.resolve(curve)?;
    let profile = AspectProfile::constant(phi)?;
    let seeds = seed::grid_seeds(curve, &profile, &res)?;
    Ok(seeds
        .into_iter()
        .map(|s| seed::to_torus(s.idx, res.pair_grid))
        .collect())
}

/// Refines one seed to an inscribed rectangle.
pub fn refine(
    curve: &Curve,
    seed: TorusPoint4,
    profile: &AspectProfile,
    cfg: &SolverConfig,
) -> Result<RectangleSolution> {
    let res = cfg.resolve(curve)?;
    refine::refine_root(curve, seed, profile, &res).map(|r| r.solution)
}

/// All rectangles with diagonal angle `phi` found from the grid seeds,
/// canonical and sorted by half-diagonal.
pub fn solve_all(curve: &Curve, phi: f64, cfg: &SolverConfig) -> Result<Vec<RectangleSolution>> {
    check_phi(phi)?;
    let profile = AspectProfile::constant(phi)?;
    let res = cfg.resolve(curve)?;
    solve_seeded(curve, &profile, &res, &[])
}

/// Rectangles whose diagonal angle is `profile(diagonal length)`.
pub fn solve_porism(
    curve: &Curve,
    profile: &AspectProfile,
    cfg: &SolverConfig,
) -> Result<Vec<RectangleSolution>> {
    let res = cfg.resolve(curve)?;
    profile.check_domain(PORISM_DOMAIN_MARGIN * res.diameter)?;
    solve_seeded(curve, profile, &res, &[])
}

/// Outcome of a search that may have been repeated on a finer grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Attempt {
    pub solutions: Vec<RectangleSolution>,
    pub pair_grid: usize,
    pub retried: bool,
}

/// Runs `search` once, and once more with `pair_grid` doubled if the first
/// run finds nothing.
pub fn with_retry<F>(cfg: &SolverConfig, mut search: F) -> Result<Attempt>
where
    F: FnMut(&SolverConfig) -> Result<Vec<RectangleSolution>>,
{
    match search(cfg) {
        Ok(solutions) => Ok(Attempt {
            solutions,
            pair_grid: cfg.pair_grid,
            retried: false,
        }),
        Err(Error::NoSolutionFound { .. }) => {
            let finer = cfg.with_pair_grid(cfg.pair_grid * 2);
            let solutions = search(&finer)?;
            Ok(Attempt {
                solutions,
                pair_grid: finer.pair_grid,
                retried: true,
            })
        }
        Err(e) => Err(e),
    }
}

pub fn solve_all_with_retry(curve: &Curve, phi: f64, cfg: &SolverConfig) -> Result<Attempt> {
    with_retry(cfg, |c| solve_all(curve, phi, c))
}

pub fn solve_porism_with_retry(
    curve: &Curve,
    profile: &AspectProfile,
    cfg: &SolverConfig,
) -> Result<Attempt> {
    with_retry(cfg, |c| solve_porism(curve, profile, c))
}

/// The shared pipeline: grid seeds followed by `extra` seeds, refined in
/// parallel, then canonicalized, merged and sorted.
pub(crate) fn solve_seeded(
    curve: &Curve,
    profile: &AspectProfile,
    res: &Resolved,
    extra: &[TorusPoint4],
) -> Result<Vec<RectangleSolution>> {
    let mut seeds: Vec<TorusPoint4> = seed::thin(seed::grid_seeds(curve, profile, res)?)
        .into_iter()
        .map(|s| seed::to_torus(s.idx, res.pair_grid))
        .collect();
    seeds.extend_from_slice(extra);

    let refined: Vec<_> = seeds
        .par_iter()
        .map(|u| refine::refine_root(curve, *u, profile, res))
        .collect();
    let mut roots = Vec::new();
    for r in refined {
        match r {
            Ok(r) => roots.push(r),
            Err(Error::ProfileOutOfRange { r, value }) => {
                return Err(Error::ProfileOutOfRange { r, value })
            }
            Err(_) => {}
        }
    }

    let solutions = merge(roots, res);
    if solutions.is_empty() {
        return Err(Error::NoSolutionFound {
            pair_grid: res.pair_grid,
        });
    }
    Ok(solutions)
}

fn merge(roots: Vec<refine::Refined>, res: &Resolved) -> Vec<RectangleSolution> {
    let canon: Vec<(RectangleSolution, bool)> = roots
        .into_iter()
        .map(|r| (canonical_with(&r.solution, res.snap_tol), r.on_family))
        .filter(|(s, _)| verify_rectangle(s, VERIFY_TOL))
        .collect();

    let n = canon.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let link = FAMILY_LINK_STEPS * TAU / res.pair_grid as f64;
    for i in 0..n {
        for j in i + 1..n {
            let (a, fa) = &canon[i];
            let (b, fb) = &canon[j];
            let same = same_rectangle(a, b, res.snap_tol)
                || (*fa
                    && *fb
                    && a.params
                        .orbit_distance(&b.params, is_square(a.phi) && is_square(b.phi))
                        <= link);
            if same {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut out: Vec<RectangleSolution> = (0..n)
        .filter(|&i| find(&mut parent, i) == i)
        .map(|i| canon[i].0.clone())
        .collect();
    out.sort_by(|x, y| x.half_diag.total_cmp(&y.half_diag));
    out
}
