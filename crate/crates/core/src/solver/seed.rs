// SPDX-License-Identifier: MIT OR Apache-2.0

//! Seeding by midpoint pairing.
//!
//! Every chord between two grid parameters is binned by its midpoint. Two
//! chords from the same or neighboring bins with nearly equal midpoints and
//! lengths, meeting at nearly the requested angle, approximate an inscribed
//! rectangle and become a starting point for refinement.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::config::Resolved;
use crate::curve::Curve;
use crate::error::Result;
use crate::system::{angle_diff, max_abs, residual_from_points, AspectProfile, TorusPoint4};

/// Grid steps per cell when thinning seeds on the torus.
const THIN_CELL: usize = 4;

struct Chord {
    i: usize,
    j: usize,
    mid: Complex64,
    diff: Complex64,
    len: f64,
}

pub(crate) struct GridSeed {
    pub idx: [usize; 4],
    pub score: f64,
}

fn chords(samples: &[Complex64]) -> Vec<Chord> {
    let n = samples.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (samples[i], samples[j]);
            let diff = a - b;
            out.push(Chord {
                i,
                j,
                mid: (a + b) / 2.0,
                diff,
                len: diff.norm(),
            });
        }
    }
    out
}

/// Raw seeds on a `pair_grid` lattice, as grid indices.
pub(crate) fn grid_seeds(
    curve: &Curve,
    profile: &AspectProfile,
    cfg: &Resolved,
) -> Result<Vec<GridSeed>> {
    let n = cfg.pair_grid;
    let samples = curve.sample(n);
    let chords = chords(&samples);
    let bin = cfg.bin_size;
    let cell_of = |m: Complex64| ((m.re / bin).floor() as i64, (m.im / bin).floor() as i64);
    let mut bins: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (k, c) in chords.iter().enumerate() {
        bins.entry(cell_of(c.mid)).or_default().push(k);
    }

    let mut seeds = Vec::new();
    for first in &chords {
        let (cx, cy) = cell_of(first.mid);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(members) = bins.get(&(cx + dx, cy + dy)) else {
                    continue;
                };
                for &k in members {
                    let second = &chords[k];
                    if [second.i, second.j]
                        .iter()
                        .any(|x| *x == first.i || *x == first.j)
                    {
                        continue;
                    }
                    if (first.mid - second.mid).norm() > bin {
                        continue;
                    }
                    let longest = first.len.max(second.len);
                    if (first.len - second.len).abs() > cfg.length_slack * longest {
                        continue;
                    }
                    let target = profile.value(second.len)?;
                    // Aspect angles near 0 or π blur into the identity pairing;
                    // the slack never exceeds half the distance to them.
                    let slack = cfg.angle_slack.min(0.5 * target.min(PI - target));
                    let forward = (first.diff / second.diff).arg();
                    let (err_fwd, err_rev) = (
                        angle_diff(forward, target).abs(),
                        angle_diff(forward + PI, target).abs(),
                    );
                    let (err, idx) = if err_fwd <= err_rev {
                        (err_fwd, [first.i, first.j, second.i, second.j])
                    } else {
                        (err_rev, [first.i, first.j, second.j, second.i])
                    };
                    if err > slack {
                        continue;
                    }
                    let pts = idx.map(|x| samples[x]);
                    let score = max_abs(&residual_from_points(&pts, profile)?);
                    seeds.push(GridSeed { idx, score });
                }
            }
        }
    }
    Ok(seeds)
}

pub(crate) fn to_torus(idx: [usize; 4], n: usize) -> TorusPoint4 {
    let a = idx.map(|x| TAU * x as f64 / n as f64);
    TorusPoint4::new(a[0], a[1], a[2], a[3])
}

/// Keeps the best-scoring seed per torus cell of `THIN_CELL` grid steps,
/// identifying seeds related by chord reversal. Output is ordered by score.
pub(crate) fn thin(seeds: Vec<GridSeed>) -> Vec<GridSeed> {
    let mut best: BTreeMap<[usize; 4], GridSeed> = BTreeMap::new();
    for seed in seeds {
        let [a, b, c, d] = seed.idx;
        let rep = [a, b, c, d].min([b, a, d, c]);
        let key = rep.map(|x| x / THIN_CELL);
        match best.get(&key) {
            Some(kept) if (kept.score, kept.idx) <= (seed.score, seed.idx) => {}
            _ => {
                best.insert(key, seed);
            }
        }
    }
    let mut out: Vec<GridSeed> = best.into_values().collect();
    out.sort_by(|x, y| x.score.total_cmp(&y.score).then(x.idx.cmp(&y.idx)));
    out
}
