// SPDX-License-Identifier: MIT OR Apache-2.0

//! Brute-force search over grid chord pairs, without refinement.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::seed::to_torus;
use crate::curve::Curve;
use crate::system::{angle_diff, TorusPoint4};

/// A grid quadruple whose chords pass the midpoint, length and angle tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleHit {
    pub params: TorusPoint4,
    /// `[γ(s), γ(s2), γ(t), γ(t2)]`, the same cyclic order as solutions.
    pub vertices: [Complex64; 4],
    #[serde(skip)]
    idx: [usize; 4],
}

impl OracleHit {
    pub fn grid_indices(&self) -> [usize; 4] {
        self.idx
    }
}

struct Chord {
    i: usize,
    j: usize,
    mid: Complex64,
    diff: Complex64,
    len: f64,
}

/// Every quadruple `(s, t, s2, t2)` of grid parameters, `s < t` as indices,
/// whose chords `AB` and `CD` satisfy
///
/// * `|mid(AB) − mid(CD)| ≤ slack · max(|AB|, |CD|)`,
/// * `||AB| − |CD|| ≤ slack · max(|AB|, |CD|)`,
/// * the directed angle from `CD` to `AB` is within `slack` of `phi`,
///
/// and which use four distinct grid points. Output is in enumeration order.
pub fn oracle_solve(curve: &Curve, phi: f64, grid: usize, slack: f64) -> Vec<OracleHit> {
    let samples = curve.sample(grid);
    let mut chords = Vec::with_capacity(grid * grid.saturating_sub(1) / 2);
    for i in 0..grid {
        for j in i + 1..grid {
            let (a, b) = (samples[i], samples[j]);
            let diff = a - b;
            chords.push(Chord {
                i,
                j,
                mid: (a + b) / 2.0,
                diff,
                len: diff.norm(),
            });
        }
    }
    let max_len = chords.iter().fold(0.0f64, |m, c| m.max(c.len));
    let window = slack * max_len;

    let mut order: Vec<usize> = (0..chords.len()).collect();
    order.sort_by(|&x, &y| {
        chords[x]
            .mid
            .re
            .total_cmp(&chords[y].mid.re)
            .then(x.cmp(&y))
    });

    let mut hits = Vec::new();
    for (pos, &fi) in order.iter().enumerate() {
        let first = &chords[fi];
        let lo = order[..pos].partition_point(|&k| chords[k].mid.re < first.mid.re - window);
        for &si in &order[lo..] {
            let second = &chords[si];
            if second.mid.re > first.mid.re + window {
                break;
            }
            if si == fi
                || [second.i, second.j]
                    .iter()
                    .any(|x| *x == first.i || *x == first.j)
            {
                continue;
            }
            let longest = first.len.max(second.len);
            if (first.mid - second.mid).norm() > slack * longest
                || (first.len - second.len).abs() > slack * longest
            {
                continue;
            }
            let angle = (first.diff / second.diff).arg();
            for (idx, a) in [
                ([first.i, first.j, second.i, second.j], angle),
                (
                    [first.i, first.j, second.j, second.i],
                    angle + std::f64::consts::PI,
                ),
            ] {
                if angle_diff(a, phi).abs() <= slack {
                    hits.push((fi, si, idx));
                }
            }
        }
    }
    hits.sort_unstable();
    hits.into_iter()
        .map(|(_, _, idx)| OracleHit {
            params: to_torus(idx, grid),
            vertices: [
                samples[idx[0]],
                samples[idx[2]],
                samples[idx[1]],
                samples[idx[3]],
            ],
            idx,
        })
        .collect()
}

/// Relabelings of a grid quadruple that describe the same rectangle at the
/// same angle.
fn relabelings(idx: [usize; 4], square: bool) -> Vec<[usize; 4]> {
    let [a, b, c, d] = idx;
    let mut out = vec![idx, [b, a, d, c]];
    if square {
        out.push([c, d, b, a]);
        out.push([d, c, a, b]);
    }
    out
}

/// Groups hits by single linkage: two hits are linked when some relabeling
/// of one lies within one grid step of the other in every coordinate.
/// Clusters are returned as sorted index lists, ordered by their first hit.
pub fn oracle_clusters(hits: &[OracleHit], grid: usize, square: bool) -> Vec<Vec<usize>> {
    let mut lookup: HashMap<[usize; 4], Vec<usize>> = HashMap::new();
    for (k, h) in hits.iter().enumerate() {
        lookup.entry(h.idx).or_default().push(k);
    }
    let mut parent: Vec<usize> = (0..hits.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let step = |x: usize, d: usize| (x + grid + d - 1) % grid;
    for (k, h) in hits.iter().enumerate() {
        for base in relabelings(h.idx, square) {
            for code in 0..81 {
                let offs = [code % 3, code / 3 % 3, code / 9 % 3, code / 27];
                let key = [
                    step(base[0], offs[0]),
                    step(base[1], offs[1]),
                    step(base[2], offs[2]),
                    step(base[3], offs[3]),
                ];
                if let Some(others) = lookup.get(&key) {
                    for &o in others {
                        let (ra, rb) = (find(&mut parent, k), find(&mut parent, o));
                        if ra != rb {
                            parent[ra.max(rb)] = ra.min(rb);
                        }
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for k in 0..hits.len() {
        let root = find(&mut parent, k);
        let g = *slot.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(k);
    }
    groups
}

/// Orbit distance in torus parameters from `u` to the nearest hit.
pub fn nearest_hit_distance(hits: &[OracleHit], u: &TorusPoint4, square: bool) -> f64 {
    hits.iter()
        .map(|h| h.params.orbit_distance(u, square))
        .fold(f64::INFINITY, f64::min)
}

/// Grid spacing `2π/grid` in torus parameters.
pub fn grid_step(grid: usize) -> f64 {
    TAU / grid as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    #[test]
    fn circle_square_hits_lie_near_the_family() {
        let hits = oracle_solve(&Curve::circle(), FRAC_PI_2, 256, 0.05);
        assert!(!hits.is_empty());
        // On the unit circle the family is e^{iα}·(1, −i, −1, i). With angular
        // offsets δ_k of the vertices from the α = 0 member, the best α is the
        // midrange of the δ_k.
        for h in &hits {
            let corners = [0.0, -FRAC_PI_2, std::f64::consts::PI, FRAC_PI_2];
            let delta: Vec<f64> = h
                .vertices
                .iter()
                .zip(corners)
                .map(|(v, c)| angle_diff(v.arg(), c))
                .collect();
            let base = delta[0];
            let rel: Vec<f64> = delta.iter().map(|d| angle_diff(*d, base)).collect();
            let (lo, hi) = rel
                .iter()
                .fold((0.0f64, 0.0f64), |(l, u), x| (l.min(*x), u.max(*x)));
            let dev = 2.0 * ((hi - lo) / 4.0).sin();
            assert!(dev < 0.1, "{dev}");
        }
    }

    #[test]
    fn zero_slack_is_empty_on_generic_curves() {
        let curve = crate::curve::preset("perturbed-circle(1)").unwrap();
        assert!(oracle_solve(&curve, FRAC_PI_3, 64, 0.0).is_empty());
    }

    #[test]
    fn deterministic() {
        let curve = Curve::ellipse(2.0, 1.0);
        let a = oracle_solve(&curve, FRAC_PI_3, 96, 0.05);
        let b = oracle_solve(&curve, FRAC_PI_3, 96, 0.05);
        assert_eq!(a, b);
    }

    #[test]
    fn ellipse_clusters_are_separate_rectangles() {
        let curve = Curve::ellipse(2.0, 1.0);
        let hits = oracle_solve(&curve, FRAC_PI_3, 128, 0.05);
        let clusters = oracle_clusters(&hits, 128, false);
        assert_eq!(clusters.len(), 2);
    }
}
