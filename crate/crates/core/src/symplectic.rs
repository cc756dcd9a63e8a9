// SPDX-License-Identifier: MIT OR Apache-2.0

//! Maps on `ℂ² = {(z, w)}` and the standard symplectic form
//! `ω = dx∧dy + r·dr∧dθ` where `z = x + iy` and `w = r e^{iθ}`.
//!
//! `l(z, w) = ((z+w)/2, (z−w)/2)` sends a pair of curve points to their
//! midpoint and half-difference, `g` squares the angle of `w` while shrinking
//! its modulus by `√2`, and `R_φ` / `S_φ` rotate the `w` factor by a constant
//! or radius-dependent angle. All are symplectic (`l` up to the factor ½)
//! away from `w = 0`; [`pullback_defect`] measures how far that holds
//! numerically at a point.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::system::AspectProfile;

/// `r_min` for unit-diameter data.
pub const DEFAULT_R_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticPoint {
    pub z: Complex64,
    pub w: Complex64,
}

impl SymplecticPoint {
    pub fn new(z: Complex64, w: Complex64) -> Self {
        SymplecticPoint { z, w }
    }

    /// From the mixed coordinates `(z, r, θ)`.
    pub fn from_polar(z: Complex64, r: f64, theta: f64) -> Self {
        SymplecticPoint {
            z,
            w: Complex64::from_polar(r, theta),
        }
    }

    /// `r = |w|`.
    pub fn radius(&self) -> f64 {
        self.w.norm()
    }

    /// `θ = arg w ∈ [0, 2π)`; zero when `w = 0`.
    pub fn angle(&self) -> f64 {
        if self.w == Complex64::new(0.0, 0.0) {
            0.0
        } else {
            self.w.arg().rem_euclid(TAU)
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.z.re, self.z.im, self.w.re, self.w.im]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        SymplecticPoint {
            z: Complex64::new(a[0], a[1]),
            w: Complex64::new(a[2], a[3]),
        }
    }

    fn norm(&self) -> f64 {
        (self.z.norm_sqr() + self.w.norm_sqr()).sqrt()
    }
}

/// Tangent vector `(dz_x, dz_y, dw_x, dw_y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector4(pub [f64; 4]);

impl TangentVector4 {
    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        TangentVector4(v)
    }

    pub fn from_complex(dz: Complex64, dw: Complex64) -> Self {
        TangentVector4([dz.re, dz.im, dw.re, dw.im])
    }

    fn dz(&self) -> Complex64 {
        Complex64::new(self.0[0], self.0[1])
    }

    fn dw(&self) -> Complex64 {
        Complex64::new(self.0[2], self.0[3])
    }

    fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn scaled(&self, k: f64) -> Self {
        TangentVector4(self.0.map(|x| x * k))
    }
}

/// `ω(u, v) = Im(conj(u_z) v_z) + Im(conj(u_w) v_w)`.
///
/// `r·dr∧dθ` is the area form of the `w` plane, so in Cartesian coordinates
/// `ω` is the sum of the two planar area forms.
pub fn symplectic_form(u: &TangentVector4, v: &TangentVector4) -> f64 {
    (u.dz().conj() * v.dz()).im + (u.dw().conj() * v.dw()).im
}

pub fn map_l(p: SymplecticPoint) -> SymplecticPoint {
    SymplecticPoint {
        z: (p.z + p.w) / 2.0,
        w: (p.z - p.w) / 2.0,
    }
}

/// `(u, v) ↦ (u + v, u − v)`.
pub fn inverse_l(q: SymplecticPoint) -> SymplecticPoint {
    SymplecticPoint {
        z: q.z + q.w,
        w: q.z - q.w,
    }
}

/// `(z, r, θ) ↦ (z, r/√2, 2θ)`, extended by `(z, 0) ↦ (z, 0)`.
pub fn map_g(p: SymplecticPoint) -> SymplecticPoint {
    let r = p.w.norm();
    if r == 0.0 {
        return p;
    }
    // w²/(√2|w|) has modulus r/√2 and argument 2θ.
    SymplecticPoint {
        z: p.z,
        w: p.w * p.w * (FRAC_1_SQRT_2 / r),
    }
}

/// `R_φ: (z, w) ↦ (z, e^{iφ} w)`.
pub fn rotate_phi(p: SymplecticPoint, phi: f64) -> SymplecticPoint {
    SymplecticPoint {
        z: p.z,
        w: p.w * Complex64::from_polar(1.0, phi),
    }
}

/// `S_φ: (z, r, θ) ↦ (z, r, θ + φ(2r))`.
pub fn twist_sphi(p: SymplecticPoint, profile: &AspectProfile) -> Result<SymplecticPoint> {
    let angle = profile.value(2.0 * p.w.norm())?;
    Ok(rotate_phi(p, angle))
}

/// Midpoint and chord length of a pair of plane points.
pub fn vaughan_map(a: Complex64, b: Complex64) -> (Complex64, f64) {
    ((a + b) / 2.0, (a - b).norm())
}

/// Midpoint and the `2n`-th power of the difference.
pub fn hugelmeyer_map(a: Complex64, b: Complex64, n: u32) -> SymplecticPoint {
    SymplecticPoint {
        z: (a + b) / 2.0,
        w: (a - b).powu(2 * n),
    }
}

/// Maps whose pullback of `ω` can be audited.
#[derive(Debug, Clone, PartialEq)]
pub enum PlanarMap {
    L,
    G,
    Rotate(f64),
    Twist(AspectProfile),
}

impl PlanarMap {
    pub fn apply(&self, p: SymplecticPoint) -> Result<SymplecticPoint> {
        Ok(match self {
            PlanarMap::L => map_l(p),
            PlanarMap::G => map_g(p),
            PlanarMap::Rotate(phi) => rotate_phi(p, *phi),
            PlanarMap::Twist(profile) => twist_sphi(p, profile)?,
        })
    }

    /// Real 4×4 Jacobian at `p`: analytic for `l` and `R_φ`, central
    /// differences with `h = 1e-6·max(1, |p|)` for `g` and `S_φ`.
    pub fn jacobian(&self, p: SymplecticPoint) -> Result<Matrix4<f64>> {
        match self {
            PlanarMap::L => Ok(Matrix4::new(
                0.5, 0.0, 0.5, 0.0, //
                0.0, 0.5, 0.0, 0.5, //
                0.5, 0.0, -0.5, 0.0, //
                0.0, 0.5, 0.0, -0.5,
            )),
            PlanarMap::Rotate(phi) => {
                let (sin, cos) = phi.sin_cos();
                Ok(Matrix4::new(
                    1.0, 0.0, 0.0, 0.0, //
                    0.0, 1.0, 0.0, 0.0, //
                    0.0, 0.0, cos, -sin, //
                    0.0, 0.0, sin, cos,
                ))
            }
            PlanarMap::G | PlanarMap::Twist(_) => self.central_difference_jacobian(p),
        }
    }

    fn central_difference_jacobian(&self, p: SymplecticPoint) -> Result<Matrix4<f64>> {
        let h = 1e-6 * p.norm().max(1.0);
        let base = p.to_array();
        let mut jac = Matrix4::zeros();
        for j in 0..4 {
            let mut plus = base;
            let mut minus = base;
            plus[j] += h;
            minus[j] -= h;
            let fp = self.apply(SymplecticPoint::from_array(plus))?.to_array();
            let fm = self.apply(SymplecticPoint::from_array(minus))?.to_array();
            for i in 0..4 {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        Ok(jac)
    }

    fn needs_axis_clearance(&self) -> bool {
        matches!(self, PlanarMap::G | PlanarMap::Twist(_))
    }
}

/// `max_{i<j} |ω(J eᵢ, J eⱼ) − scale·ω(eᵢ, eⱼ)|` over the coordinate frame,
/// with `r_min = 1e-6`.
pub fn pullback_defect(map: &PlanarMap, p: SymplecticPoint, scale: f64) -> Result<f64> {
    pullback_defect_with(map, p, scale, DEFAULT_R_MIN)
}

pub fn pullback_defect_with(
    map: &PlanarMap,
    p: SymplecticPoint,
    scale: f64,
    r_min: f64,
) -> Result<f64> {
    let radius = p.w.norm();
    if map.needs_axis_clearance() && radius <= r_min {
        return Err(Error::TooCloseToAxis { radius, r_min });
    }
    let jac = map.jacobian(p)?;
    let pushed: Vec<TangentVector4> = (0..4)
        .map(|j| {
            let col = jac.column(j);
            TangentVector4([col[0], col[1], col[2], col[3]])
        })
        .collect();
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in i + 1..4 {
            let reference = symplectic_form(&TangentVector4::basis(i), &TangentVector4::basis(j));
            let got = symplectic_form(&pushed[i], &pushed[j]);
            worst = worst.max((got - scale * reference).abs());
        }
    }
    Ok(worst)
}

/// `|ω(u, v)|` for the unit tangent frame of `L = l(γ×γ)` at `l(γ(s), γ(t))`.
pub fn lagrangian_defect(curve: &Curve, s: f64, t: f64) -> Result<f64> {
    let eps = curve.immersion_eps();
    let ds = curve.derivative(s);
    let dt = curve.derivative(t);
    for (param, d) in [(s, ds), (t, dt)] {
        if d.norm() < eps {
            return Err(Error::DegenerateTangent {
                s: param,
                speed: d.norm(),
            });
        }
    }
    // Dl(a, b) = ((a+b)/2, (a−b)/2)
    let u = TangentVector4::from_complex(ds / 2.0, ds / 2.0);
    let v = TangentVector4::from_complex(dt / 2.0, -dt / 2.0);
    let u = u.scaled(1.0 / u.norm());
    let v = v.scaled(1.0 / v.norm());
    Ok(symplectic_form(&u, &v).abs())
}
