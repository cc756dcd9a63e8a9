// SPDX-License-Identifier: MIT OR Apache-2.0

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{fit_from_points, Curve};
use crate::error::{Error, Result};

/// Names accepted by [`preset`]; parenthesized arguments are optional.
pub const PRESET_NAMES: &[&str] = &[
    "circle",
    "ellipse(a,b)",
    "rounded-rectangle",
    "perturbed-circle(seed)",
    "bean",
];

/// Looks up a named curve, e.g. `circle`, `ellipse(2,1)`, `perturbed-circle(3)`.
pub fn preset(name: &str) -> Result<Curve> {
    let unknown = || Error::UnknownPreset(name.to_string());
    let name = name.trim();
    let (head, args) = match name.find('(') {
        Some(open) => {
            let close = name.strip_suffix(')').ok_or_else(unknown)?;
            let args = close[open + 1..]
                .split(',')
                .map(|a| a.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| unknown())?;
            (name[..open].trim(), args)
        }
        None => (name, Vec::new()),
    };
    match (head, args.as_slice()) {
        ("circle", []) => Ok(Curve::circle()),
        ("ellipse", []) => Ok(Curve::ellipse(2.0, 1.0)),
        ("ellipse", &[a, b]) if a > 0.0 && b > 0.0 => Ok(Curve::ellipse(a, b)),
        ("rounded-rectangle", []) => Ok(rounded_rectangle()),
        ("perturbed-circle", []) => Ok(perturbed_circle(1)),
        ("perturbed-circle", &[seed]) if seed >= 0.0 && seed.fract() == 0.0 => {
            Ok(perturbed_circle(seed as u64))
        }
        ("bean", []) => Ok(bean()),
        _ => Err(unknown()),
    }
}

/// A 3 × 2 rectangle with corner radius 0.5, low-passed at 12 harmonics.
fn rounded_rectangle() -> Curve {
    let (hw, hh, radius) = (1.5, 1.0, 0.5);
    let per_arc = 64;
    let mut pts = Vec::with_capacity(4 * per_arc);
    let corners = [
        Complex64::new(hw - radius, hh - radius),
        Complex64::new(-(hw - radius), hh - radius),
        Complex64::new(-(hw - radius), -(hh - radius)),
        Complex64::new(hw - radius, -(hh - radius)),
    ];
    // Each quarter arc starts where the previous straight side ends.
    for (q, center) in corners.iter().enumerate() {
        for j in 0..per_arc {
            let a = q as f64 * FRAC_PI_2 + FRAC_PI_2 * j as f64 / per_arc as f64;
            pts.push(center + Complex64::from_polar(radius, a));
        }
    }
    fit_from_points(&pts, 12).expect("rounded rectangle fits")
}

/// Unit circle plus small random harmonics `k ∈ {-3, -2, -1, 2, 3, 4}`.
///
/// `Σ |k| |c_k| < 0.72` keeps `|γ′| > 0.28`, so every seed gives an
/// immersed curve.
fn perturbed_circle(seed: u64) -> Curve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = vec![(1, Complex64::new(1.0, 0.0))];
    for k in [-3i64, -2, -1, 2, 3, 4] {
        let amp = rng.gen_range(0.0..0.12) / k.unsigned_abs() as f64;
        let arg = rng.gen_range(0.0..TAU);
        terms.push((k, Complex64::from_polar(amp, arg)));
    }
    Curve::from_terms(4, &terms).expect("perturbed circle")
}

/// Non-convex bean: `e^{is} + 0.3i e^{2is} + 0.15 e^{-is}`.
fn bean() -> Curve {
    Curve::from_terms(
        2,
        &[
            (1, Complex64::new(1.0, 0.0)),
            (2, Complex64::new(0.0, 0.3)),
            (-1, Complex64::new(0.15, 0.0)),
        ],
    )
    .expect("bean")
}
