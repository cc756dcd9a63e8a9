// SPDX-License-Identifier: MIT OR Apache-2.0

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{angle_diff, max_abs, residual_from_points, AspectProfile, Chords, TorusPoint4};
use crate::curve::Curve;
use crate::error::{Error, Result};

/// Residual acceptance for unit-diameter curves.
pub const ACCEPT_TOL_REL: f64 = 1e-10;
/// Minimum half-diagonal relative to the curve diameter.
pub const R_MIN_REL: f64 = 1e-6;
/// Snap tolerance for vertex ordering relative to the curve diameter.
pub const SNAP_TOL_REL: f64 = 1e-7;

/// Angles closer than this to `π/2` are treated as squares when
/// canonicalizing, which enables the chord-exchange relabeling.
const SQUARE_ANGLE_EPS: f64 = 1e-12;

/// An inscribed rectangle recovered from a root of the system.
///
/// `vertices = [γ(s), γ(s2), γ(t), γ(t2)]` in cyclic order, so
/// `vertices[0] − vertices[2]` is `e^{iφ}` times `vertices[1] − vertices[3]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RectangleSolution {
    pub params: TorusPoint4,
    pub center: Complex64,
    pub half_diag: f64,
    pub theta: f64,
    pub phi: f64,
    pub vertices: [Complex64; 4],
    pub residual_norm: f64,
}

impl RectangleSolution {
    /// Directed angle from the second diagonal to the first, in `(-π, π]`.
    pub fn diagonal_angle(&self) -> f64 {
        let [a, c, b, d] = self.vertices;
        ((a - b) / (c - d)).arg()
    }
}

/// Builds the rectangle at `u` with the default tolerances for `curve`.
pub fn rectangle_from_params(
    curve: &Curve,
    u: &TorusPoint4,
    profile: &AspectProfile,
) -> Result<RectangleSolution> {
    let scale = curve.diameter();
    rectangle_from_params_with(curve, u, profile, ACCEPT_TOL_REL * scale, R_MIN_REL * scale)
}

pub fn rectangle_from_params_with(
    curve: &Curve,
    u: &TorusPoint4,
    profile: &AspectProfile,
    accept_tol: f64,
    r_min: f64,
) -> Result<RectangleSolution> {
    let mut u = *u;
    let mut pts = Chords::at(curve, &u).pts;
    let residual_norm = max_abs(&residual_from_points(&pts, profile)?);
    if residual_norm > accept_tol {
        return Err(Error::NotConverged {
            residual: residual_norm,
            iterations: 0,
        });
    }
    let half_diag = (pts[2] - pts[3]).norm() / 2.0;
    if half_diag < r_min {
        return Err(Error::DegenerateRectangle { half_diag, r_min });
    }
    let mut phi = profile.value(2.0 * half_diag)?;
    if profile.is_constant() && phi > FRAC_PI_2 {
        // Report obtuse constant angles as their acute supplement.
        u = u.exchange_chords();
        let [a, b, c, d] = pts;
        pts = [c, d, b, a];
        phi = PI - phi;
    }
    Ok(assemble(u, pts, phi, residual_norm))
}

fn assemble(
    params: TorusPoint4,
    pts: [Complex64; 4],
    phi: f64,
    residual_norm: f64,
) -> RectangleSolution {
    let [a, b, c, d] = pts;
    let chord = c - d;
    RectangleSolution {
        params,
        center: ((a + b) + (c + d)) / 4.0,
        half_diag: chord.norm() / 2.0,
        theta: chord.arg().rem_euclid(TAU),
        phi,
        vertices: [a, c, b, d],
        residual_norm,
    }
}

fn snap_cmp(p: Complex64, q: Complex64, snap: f64) -> Ordering {
    if (p.re - q.re).abs() > snap {
        return p.re.total_cmp(&q.re);
    }
    if (p.im - q.im).abs() > snap {
        return p.im.total_cmp(&q.im);
    }
    Ordering::Equal
}

fn snap_cmp_list(a: &[Complex64], b: &[Complex64], snap: f64) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(p, q)| snap_cmp(*p, *q, snap))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Vertices sorted by `(x, y)` with ties inside `snap` broken by the next key.
pub fn sorted_vertices(sol: &RectangleSolution, snap: f64) -> [Complex64; 4] {
    let mut v = sol.vertices;
    v.sort_by(|p, q| snap_cmp(*p, *q, snap));
    v
}

/// Whether two solutions have the same vertex set within `snap`.
pub fn same_rectangle(a: &RectangleSolution, b: &RectangleSolution, snap: f64) -> bool {
    let (va, vb) = (sorted_vertices(a, snap), sorted_vertices(b, snap));
    va.iter()
        .zip(&vb)
        .all(|(p, q)| (p.re - q.re).abs() <= snap && (p.im - q.im).abs() <= snap)
}

/// Canonical representative with the snap tolerance taken from the
/// rectangle's own diagonal.
pub fn canonical(sol: &RectangleSolution) -> RectangleSolution {
    canonical_with(
        sol,
        SNAP_TOL_REL * (2.0 * sol.half_diag).max(f64::MIN_POSITIVE),
    )
}

/// Among the labelings of `sol` that describe the same rectangle at the same
/// angle, picks the one whose vertex tuple is lexicographically smallest.
///
/// Reversing both chords is always such a labeling; for squares, exchanging
/// the chords is one too.
pub fn canonical_with(sol: &RectangleSolution, snap: f64) -> RectangleSolution {
    let square = (sol.phi - FRAC_PI_2).abs() <= SQUARE_ANGLE_EPS;
    // Cyclic rotations of [A, C, B, D]: by 2 is the chord reversal, by 1 and 3
    // the chord exchanges.
    let shifts: &[usize] = if square { &[0, 2, 1, 3] } else { &[0, 2] };
    let mut best: Option<RectangleSolution> = None;
    for &k in shifts {
        let cand = rotate_labels(sol, k);
        let better = match &best {
            None => true,
            Some(b) => snap_cmp_list(&cand.vertices, &b.vertices, snap) == Ordering::Less,
        };
        if better {
            best = Some(cand);
        }
    }
    best.expect("at least one labeling")
}

fn rotate_labels(sol: &RectangleSolution, k: usize) -> RectangleSolution {
    if k == 0 {
        return sol.clone();
    }
    let v = sol.vertices;
    let vertices = [v[k % 4], v[(k + 1) % 4], v[(k + 2) % 4], v[(k + 3) % 4]];
    let u = sol.params;
    let params = match k {
        2 => u.swap_pairs(),
        1 => u.exchange_chords(),
        _ => u.exchange_chords().swap_pairs(),
    };
    let chord = vertices[1] - vertices[3];
    RectangleSolution {
        params,
        center: sol.center,
        half_diag: chord.norm() / 2.0,
        theta: chord.arg().rem_euclid(TAU),
        phi: sol.phi,
        vertices,
        residual_norm: sol.residual_norm,
    }
}

/// Acute angle `2·atan(q/p)` between the diagonals of a `p × q` rectangle.
pub fn aspect_angle_from_ratio(p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0 && q > 0.0) {
        return Err(Error::NonpositiveSide { p, q });
    }
    let (long, short) = if p >= q { (p, q) } else { (q, p) };
    Ok(2.0 * (short / long).atan())
}

/// Geometric check, independent of the residual: the diagonals
/// `v0 v2` and `v1 v3` have equal length, share a midpoint, and the angle
/// from the second to the first is `phi`, all within `tol`.
pub fn verify_rectangle(sol: &RectangleSolution, tol: f64) -> bool {
    let [a, c, b, d] = sol.vertices;
    if sol
        .vertices
        .iter()
        .any(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return false;
    }
    let first = a - b;
    let second = c - d;
    if second.norm() == 0.0 || first.norm() == 0.0 {
        return false;
    }
    let lengths = (first.norm() - second.norm()).abs() <= tol;
    let midpoints = ((a + b) / 2.0 - (c + d) / 2.0).norm() <= tol;
    let angle = angle_diff((first / second).arg(), sol.phi).abs() <= tol;
    lengths && midpoints && angle
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    fn circle_square() -> RectangleSolution {
        let profile = AspectProfile::constant(FRAC_PI_2).unwrap();
        let u = TorusPoint4::new(0.0, PI, 1.5 * PI, FRAC_PI_2);
        rectangle_from_params(&Curve::circle(), &u, &profile).unwrap()
    }

    fn ellipse_rect(phi: f64) -> RectangleSolution {
        let ustar = (2.0 * (phi / 2.0).tan()).atan();
        let u = TorusPoint4::new(ustar, ustar + PI, -ustar, PI - ustar);
        let profile = AspectProfile::constant(phi).unwrap();
        rectangle_from_params(&Curve::ellipse(2.0, 1.0), &u, &profile).unwrap()
    }

    #[test]
    fn circle_square_fields() {
        let sol = circle_square();
        assert!(sol.center.norm() < 1e-15);
        assert!((sol.half_diag - 1.0).abs() < 1e-15);
        assert_eq!(sol.phi, FRAC_PI_2);
        assert!(verify_rectangle(&sol, 1e-10));
        // vertices = γ(s), γ(s2), γ(t), γ(t2)
        let c = Curve::circle();
        let u = sol.params;
        assert_eq!(
            sol.vertices,
            [
                c.evaluate(u.s),
                c.evaluate(u.s2),
                c.evaluate(u.t),
                c.evaluate(u.t2)
            ]
        );
    }

    #[test]
    fn translated_circle_moves_center() {
        let profile = AspectProfile::constant(FRAC_PI_2).unwrap();
        let u = TorusPoint4::new(0.0, PI, 1.5 * PI, FRAC_PI_2);
        let c = Curve::circle().translated(Complex64::new(5.0, 0.0));
        let sol = rectangle_from_params(&c, &u, &profile).unwrap();
        assert!((sol.center - Complex64::new(5.0, 0.0)).norm() < 1e-14);
        assert!((sol.half_diag - 1.0).abs() < 1e-14);
        assert_eq!(sol.phi, FRAC_PI_2);
    }

    #[test]
    fn vertex_identity() {
        for phi in [FRAC_PI_4, FRAC_PI_3, FRAC_PI_2] {
            let sol = ellipse_rect(phi);
            let e = |a: f64| sol.center + Complex64::from_polar(sol.half_diag, a);
            let expected = [
                e(sol.theta + sol.phi),
                e(sol.theta),
                sol.center * 2.0 - e(sol.theta + sol.phi),
                sol.center * 2.0 - e(sol.theta),
            ];
            for (v, w) in sol.vertices.iter().zip(expected) {
                assert!((v - w).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn diagonal_branch_is_degenerate() {
        let profile = AspectProfile::constant(FRAC_PI_3).unwrap();
        let u = TorusPoint4::new(0.7, 0.7, 0.7, 0.7);
        assert!(matches!(
            rectangle_from_params(&Curve::circle(), &u, &profile),
            Err(Error::DegenerateRectangle { .. })
        ));
    }

    #[test]
    fn non_root_is_rejected() {
        let profile = AspectProfile::constant(FRAC_PI_3).unwrap();
        let u = TorusPoint4::new(0.1, 2.0, 3.0, 4.0);
        assert!(matches!(
            rectangle_from_params(&Curve::circle(), &u, &profile),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    fn obtuse_constant_angle_is_reported_acute() {
        let sol = ellipse_rect(FRAC_PI_3);
        // The same rectangle seen with the chords exchanged sits at 2π/3.
        let u = sol.params.exchange_chords();
        let profile = AspectProfile::constant(PI - FRAC_PI_3).unwrap();
        let again = rectangle_from_params(&Curve::ellipse(2.0, 1.0), &u, &profile).unwrap();
        assert!((again.phi - FRAC_PI_3).abs() < 1e-15);
        assert!(verify_rectangle(&again, 1e-10));
        assert!(same_rectangle(&sol, &again, 1e-12));
    }

    #[test]
    fn canonical_is_idempotent_and_collapses_swaps() {
        for phi in [FRAC_PI_4, FRAC_PI_3, FRAC_PI_2] {
            let sol = ellipse_rect(phi);
            let canon = canonical(&sol);
            assert_eq!(canonical(&canon), canon);
            assert!(verify_rectangle(&canon, 1e-10));

            let profile = AspectProfile::constant(phi).unwrap();
            let swapped = rectangle_from_params(
                &Curve::ellipse(2.0, 1.0),
                &sol.params.swap_pairs(),
                &profile,
            )
            .unwrap();
            assert_eq!(canonical(&swapped).vertices, canon.vertices);
            assert_eq!(canonical(&swapped).params, canon.params);
        }
    }

    #[test]
    fn canonical_square_uses_all_four_labelings() {
        let sol = circle_square();
        let profile = AspectProfile::constant(FRAC_PI_2).unwrap();
        let other =
            rectangle_from_params(&Curve::circle(), &sol.params.exchange_chords(), &profile)
                .unwrap();
        assert_eq!(canonical(&sol).vertices, canonical(&other).vertices);
    }

    #[test]
    fn aspect_angles() {
        assert!((aspect_angle_from_ratio(1.0, 1.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((aspect_angle_from_ratio(3f64.sqrt(), 1.0).unwrap() - FRAC_PI_3).abs() < 1e-15);
        assert!(matches!(
            aspect_angle_from_ratio(1.0, 0.0),
            Err(Error::NonpositiveSide { .. })
        ));
        assert!(aspect_angle_from_ratio(-1.0, 1.0).is_err());
    }

    #[test]
    fn perturbed_vertex_fails_verification() {
        let mut sol = circle_square();
        assert!(verify_rectangle(&sol, 1e-10));
        sol.vertices[1] += Complex64::new(1e-3, 0.0);
        assert!(!verify_rectangle(&sol, 1e-6));
    }
}
