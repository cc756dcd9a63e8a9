// SPDX-License-Identifier: MIT OR Apache-2.0

//! The intersection system on the 4-torus.
//!
//! A point `u = (s, t, s2, t2)` names two chords of the curve, `A = γ(s)`,
//! `B = γ(t)` and `C = γ(s2)`, `D = γ(t2)`. The chord `AB` gives the point
//! `l(A, B)` of the torus `L = l(γ×γ)`; the chord `CD` gives
//! `S_φ(l(C, D))` on the rotated torus. The two coincide exactly when the
//! chords share a midpoint, have equal length and meet at angle
//! `φ(|C − D|)`, i.e. when `A, C, B, D` are the vertices of an inscribed
//! rectangle.

mod profile;
mod rectangle;

use std::f64::consts::TAU;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::Result;
use crate::symplectic::{map_l, twist_sphi, SymplecticPoint};

pub use profile::AspectProfile;
pub use rectangle::{
    aspect_angle_from_ratio, canonical, canonical_with, rectangle_from_params,
    rectangle_from_params_with, same_rectangle, sorted_vertices, verify_rectangle,
    RectangleSolution, ACCEPT_TOL_REL, R_MIN_REL, SNAP_TOL_REL,
};

/// Two chords of the curve, each given by a pair of parameters in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct TorusPoint4 {
    pub s: f64,
    pub t: f64,
    pub s2: f64,
    pub t2: f64,
}

fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed difference `a − b` reduced to `(-π, π]`.
pub(crate) fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

impl TorusPoint4 {
    pub fn new(s: f64, t: f64, s2: f64, t2: f64) -> Self {
        TorusPoint4 {
            s: wrap(s),
            t: wrap(t),
            s2: wrap(s2),
            t2: wrap(t2),
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.s, self.t, self.s2, self.t2]
    }

    /// `(t, s, t2, s2)`: both chords traversed backwards. For a constant
    /// angle this relabeling preserves the residual up to sign.
    pub fn swap_pairs(self) -> Self {
        TorusPoint4 {
            s: self.t,
            t: self.s,
            s2: self.t2,
            t2: self.s2,
        }
    }

    /// `(s2, t2, t, s)`: exchanges the roles of the chords. A rectangle at
    /// angle `φ` reappears at angle `π − φ`.
    pub fn exchange_chords(self) -> Self {
        TorusPoint4 {
            s: self.s2,
            t: self.t2,
            s2: self.t,
            t2: self.s,
        }
    }

    /// Max-norm distance on the torus.
    pub fn distance(&self, other: &TorusPoint4) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| angle_diff(*a, b).abs())
            .fold(0.0, f64::max)
    }

    /// Distance to the nearest relabeling of `other` that describes the same
    /// rectangle at the same angle. Chord exchange is included only for
    /// squares (`with_exchange`).
    pub fn orbit_distance(&self, other: &TorusPoint4, with_exchange: bool) -> f64 {
        let mut best = self.distance(other).min(self.distance(&other.swap_pairs()));
        if with_exchange {
            let ex = other.exchange_chords();
            best = best
                .min(self.distance(&ex))
                .min(self.distance(&ex.swap_pairs()));
        }
        best
    }
}

impl From<[f64; 4]> for TorusPoint4 {
    fn from(a: [f64; 4]) -> Self {
        TorusPoint4::new(a[0], a[1], a[2], a[3])
    }
}

impl From<TorusPoint4> for [f64; 4] {
    fn from(u: TorusPoint4) -> Self {
        u.to_array()
    }
}

/// Curve data at the four parameters of a torus point.
pub(crate) struct Chords {
    pub pts: [Complex64; 4],
    pub tangents: [Complex64; 4],
}

impl Chords {
    pub fn at(curve: &Curve, u: &TorusPoint4) -> Self {
        let mut pts = [Complex64::new(0.0, 0.0); 4];
        let mut tangents = pts;
        for (i, s) in u.to_array().into_iter().enumerate() {
            let (p, d) = curve.evaluate_with_derivative(s);
            pts[i] = p;
            tangents[i] = d;
        }
        Chords { pts, tangents }
    }
}

/// `(Re E1, Im E1, Re E2, Im E2)` with `E1 = (A+B) − (C+D)` and
/// `E2 = (A−B) − e^{iφ(|C−D|)}(C−D)`: twice the difference between
/// `l(A, B)` and `S_φ(l(C, D))`.
pub fn residual(curve: &Curve, u: &TorusPoint4, profile: &AspectProfile) -> Result<[f64; 4]> {
    let chords = Chords::at(curve, u);
    residual_from_points(&chords.pts, profile)
}

pub(crate) fn residual_from_points(
    pts: &[Complex64; 4],
    profile: &AspectProfile,
) -> Result<[f64; 4]> {
    let [a, b, c, d] = *pts;
    let first = map_l(SymplecticPoint::new(a, b));
    let second = twist_sphi(map_l(SymplecticPoint::new(c, d)), profile)?;
    let e1 = (first.z - second.z) * 2.0;
    let e2 = (first.w - second.w) * 2.0;
    Ok([e1.re, e1.im, e2.re, e2.im])
}

pub(crate) fn max_abs(v: &[f64; 4]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Analytic Jacobian of [`residual`]; columns follow `(s, t, s2, t2)`.
pub fn jacobian(curve: &Curve, u: &TorusPoint4, profile: &AspectProfile) -> Result<Matrix4<f64>> {
    let chords = Chords::at(curve, u);
    jacobian_from_chords(&chords, profile)
}

pub(crate) fn jacobian_from_chords(
    chords: &Chords,
    profile: &AspectProfile,
) -> Result<Matrix4<f64>> {
    let [_, _, c, d] = chords.pts;
    let [da, db, dc, dd] = chords.tangents;
    let chord = c - d;
    let rho = chord.norm();
    let (phi, slope) = profile.value_and_slope(rho)?;
    let rot = Complex64::from_polar(1.0, phi);
    // ∂ρ/∂s2 = Re(conj(C−D)·γ′(s2))/ρ, ∂ρ/∂t2 = −Re(conj(C−D)·γ′(t2))/ρ.
    let (drho_s2, drho_t2) = if rho > 0.0 && slope != 0.0 {
        ((chord.conj() * dc).re / rho, -(chord.conj() * dd).re / rho)
    } else {
        (0.0, 0.0)
    };
    // ∂/∂x of e^{iφ(ρ)}(C−D) picks up i·φ′·∂ρ/∂x·e^{iφ}(C−D).
    let twist = Complex64::new(0.0, slope) * rot * chord;
    let columns = [
        (da, da),
        (db, -db),
        (-dc, -(rot * dc) - twist * drho_s2),
        (-dd, rot * dd - twist * drho_t2),
    ];
    let mut jac = Matrix4::zeros();
    for (j, (e1, e2)) in columns.into_iter().enumerate() {
        jac[(0, j)] = e1.re;
        jac[(1, j)] = e1.im;
        jac[(2, j)] = e2.re;
        jac[(3, j)] = e2.im;
    }
    Ok(jac)
}
