// SPDX-License-Identifier: MIT OR Apache-2.0

//! Numerical audit of a curve: validity, derivatives, the pullback
//! identities of the maps, the Lagrangian property of `L`, and the
//! intersection-system Jacobian.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{validate, Curve, CurveValidityReport, DEFAULT_VALIDATION_SAMPLES};
use crate::error::Result;
use crate::symplectic::{
    lagrangian_defect, map_g, map_l, pullback_defect_with, PlanarMap, SymplecticPoint,
};
use crate::system::{jacobian, residual, AspectProfile, TorusPoint4};

const AUDIT_SEED: u64 = 0x5eed;
const RANDOM_POINTS: usize = 100;
const JACOBIAN_POINTS: usize = 50;
const LAGRANGIAN_GRID: usize = 32;
/// Pullback checks of `g` and `S_φ` only use points with
/// `|w| ≥ AXIS_CLEARANCE·diameter`.
const AXIS_CLEARANCE: f64 = 0.05;

pub const DERIVATIVE_TOL: f64 = 1e-6;
pub const LINEAR_PULLBACK_TOL: f64 = 1e-12;
pub const FD_PULLBACK_TOL: f64 = 1e-8;
pub const LAGRANGIAN_TOL: f64 = 1e-9;
pub const JACOBIAN_TOL: f64 = 1e-6;
pub const SWAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub samples: usize,
    pub max_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, samples: usize, max_defect: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            samples,
            max_defect,
            tolerance,
            passed: max_defect.is_finite() && max_defect < tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub validity: CurveValidityReport,
    pub checks: Vec<Check>,
    /// Largest defect among the pullback checks.
    pub max_pullback_defect: f64,
    pub passed: bool,
}

fn torus_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU)))
        .collect()
}

/// Runs every check on `curve` with a fixed sampling seed.
pub fn verify_curve(curve: &Curve) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(AUDIT_SEED);
    let diameter = curve.diameter();
    let validity = validate(curve, DEFAULT_VALIDATION_SAMPLES);
    let mut checks = vec![Check {
        name: "curve_valid".into(),
        samples: DEFAULT_VALIDATION_SAMPLES,
        max_defect: if validity.is_valid() { 0.0 } else { 1.0 },
        tolerance: 0.5,
        passed: validity.is_valid(),
    }];

    let h = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..RANDOM_POINTS {
        let s = rng.gen_range(0.0..TAU);
        let exact = curve.derivative(s);
        let fd = (curve.evaluate(s + h) - curve.evaluate(s - h)) / (2.0 * h);
        worst = worst.max((fd - exact).norm() / exact.norm().max(curve.immersion_eps()));
    }
    checks.push(Check::new(
        "derivative_fd",
        RANDOM_POINTS,
        worst,
        DERIVATIVE_TOL,
    ));

    // Points of L = l(γ×γ), together with their preimages (γ(s), γ(t)).
    let pairs: Vec<SymplecticPoint> = torus_points(&mut rng, RANDOM_POINTS)
        .into_iter()
        .map(|(s, t)| SymplecticPoint::new(curve.evaluate(s), curve.evaluate(t)))
        .collect();
    let on_l: Vec<SymplecticPoint> = pairs.iter().map(|p| map_l(*p)).collect();
    let clear: Vec<SymplecticPoint> = on_l
        .iter()
        .copied()
        .filter(|p| p.w.norm() >= AXIS_CLEARANCE * diameter)
        .collect();
    let r_min = 1e-6 * diameter;
    let twist = AspectProfile::polynomial(vec![FRAC_PI_4, 0.25 / diameter])?;

    let mut pullback_max = 0.0f64;
    let mut run = |name: &str, map: &PlanarMap, pts: &[SymplecticPoint], scale: f64, tol: f64| {
        let mut worst = 0.0f64;
        for p in pts {
            worst = worst.max(pullback_defect_with(map, *p, scale, r_min)?);
        }
        pullback_max = pullback_max.max(worst);
        Ok::<Check, crate::error::Error>(Check::new(name, pts.len(), worst, tol))
    };
    checks.push(run(
        "pullback_l",
        &PlanarMap::L,
        &pairs,
        0.5,
        LINEAR_PULLBACK_TOL,
    )?);
    checks.push(run(
        "pullback_rotate",
        &PlanarMap::Rotate(FRAC_PI_3),
        &on_l,
        1.0,
        LINEAR_PULLBACK_TOL,
    )?);
    checks.push(run(
        "pullback_g",
        &PlanarMap::G,
        &clear,
        1.0,
        FD_PULLBACK_TOL,
    )?);
    checks.push(run(
        "pullback_twist",
        &PlanarMap::Twist(twist.clone()),
        &clear,
        1.0,
        FD_PULLBACK_TOL,
    )?);

    let mut worst = 0.0f64;
    for i in 0..LAGRANGIAN_GRID {
        for j in 0..LAGRANGIAN_GRID {
            let s = TAU * i as f64 / LAGRANGIAN_GRID as f64;
            let t = TAU * j as f64 / LAGRANGIAN_GRID as f64;
            worst = worst.max(lagrangian_defect(curve, s, t)?);
        }
    }
    checks.push(Check::new(
        "lagrangian",
        LAGRANGIAN_GRID * LAGRANGIAN_GRID,
        worst,
        LAGRANGIAN_TOL,
    ));

    let mut worst = 0.0f64;
    for p in &pairs {
        let a = map_g(map_l(*p));
        let b = map_g(map_l(SymplecticPoint::new(p.w, p.z)));
        worst = worst.max((a.z - b.z).norm().max((a.w - b.w).norm()) / diameter.max(1.0));
    }
    checks.push(Check::new("swap_symmetry", pairs.len(), worst, SWAP_TOL));

    let constant = AspectProfile::constant(FRAC_PI_3)?;
    let mut worst = 0.0f64;
    for _ in 0..JACOBIAN_POINTS {
        let u = TorusPoint4::new(
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
        );
        for profile in [&constant, &twist] {
            worst = worst.max(jacobian_error(curve, &u, profile)?);
        }
    }
    checks.push(Check::new(
        "jacobian_fd",
        JACOBIAN_POINTS,
        worst,
        JACOBIAN_TOL,
    ));

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        validity,
        checks,
        max_pullback_defect: pullback_max,
        passed,
    })
}

/// Max entrywise difference between the analytic Jacobian and central
/// differences, relative to `max(1, max |J|)`.
pub fn jacobian_error(curve: &Curve, u: &TorusPoint4, profile: &AspectProfile) -> Result<f64> {
    let exact = jacobian(curve, u, profile)?;
    let h = 1e-6;
    let base = u.to_array();
    let mut worst = 0.0f64;
    for j in 0..4 {
        let mut plus = base;
        let mut minus = base;
        plus[j] += h;
        minus[j] -= h;
        let fp = residual(curve, &TorusPoint4::from(plus), profile)?;
        let fm = residual(curve, &TorusPoint4::from(minus), profile)?;
        for i in 0..4 {
            let fd = (fp[i] - fm[i]) / (2.0 * h);
            worst = worst.max((fd - exact[(i, j)]).abs());
        }
    }
    Ok(worst / exact.amax().max(1.0))
}
