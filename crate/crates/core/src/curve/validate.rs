// SPDX-License-Identifier: MIT OR Apache-2.0

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Curve;

pub const DEFAULT_VALIDATION_SAMPLES: usize = 1024;
const MIN_VALIDATION_SAMPLES: usize = 64;

/// Outcome of the numerical Jordan-curve checks.
///
/// This is a validation on a sampled polygon, not a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveValidityReport {
    pub is_immersed: bool,
    pub min_speed: f64,
    pub is_simple: bool,
    /// Curve parameters `(s, t)` of the first detected crossing.
    pub first_crossing: Option<(f64, f64)>,
}

impl CurveValidityReport {
    pub fn is_valid(&self) -> bool {
        self.is_immersed && self.is_simple
    }
}

/// Checks immersion (`min |γ′| > imm_eps`) and simplicity (no two
/// non-adjacent edges of the sampled polygon meet). `samples` is raised to
/// 64 if smaller.
pub fn validate(curve: &Curve, samples: usize) -> CurveValidityReport {
    let n = samples.max(MIN_VALIDATION_SAMPLES);
    let params: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
    let mut pts = Vec::with_capacity(n);
    let mut min_speed = f64::INFINITY;
    for &s in &params {
        let (p, d) = curve.evaluate_with_derivative(s);
        pts.push(p);
        min_speed = min_speed.min(d.norm());
    }
    let is_immersed = min_speed > curve.immersion_eps();
    let first_crossing = first_crossing(&pts).map(|(i, ti, j, tj)| {
        let step = TAU / n as f64;
        (params[i] + ti * step, params[j] + tj * step)
    });
    CurveValidityReport {
        is_immersed,
        min_speed,
        is_simple: first_crossing.is_none(),
        first_crossing,
    }
}

/// First pair of non-adjacent edges `(i, i+1)`, `(j, j+1)` of the closed
/// polygon that intersect, with the fractional positions along each edge.
fn first_crossing(pts: &[Complex64]) -> Option<(usize, f64, usize, f64)> {
    let n = pts.len();
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        for j in i + 2..n {
            // Edge n-1 is adjacent to edge 0 through the closing vertex.
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                let (ti, tj) = crossing_fractions(a, b, c, d);
                return Some((i, ti, j, tj));
            }
        }
    }
    None
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    p.re >= a.re.min(b.re)
        && p.re <= a.re.max(b.re)
        && p.im >= a.im.min(b.im)
        && p.im <= a.im.max(b.im)
}

/// Closed-segment intersection test; touching counts.
pub(crate) fn segments_intersect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

fn crossing_fractions(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (f64, f64) {
    let r = b - a;
    let s = d - c;
    let denom = r.re * s.im - r.im * s.re;
    if denom == 0.0 {
        // Collinear overlap: report the start of the overlap on each edge.
        return (0.0, 0.0);
    }
    let q = c - a;
    let t = (q.re * s.im - q.im * s.re) / denom;
    let u = (q.re * r.im - q.im * r.re) / denom;
    (t.clamp(0.0, 1.0), u.clamp(0.0, 1.0))
}
