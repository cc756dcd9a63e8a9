// SPDX-License-Identifier: MIT OR Apache-2.0

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{Curve, LENGTH_EPS};
use crate::error::{Error, Result};

/// Minimum number of input points accepted by the fitter.
pub const MIN_FIT_POINTS: usize = 16;
/// Low-pass cutoff used for freehand input when none is given.
pub const DEFAULT_FIT_CUTOFF: usize = 12;

/// How input points are assigned curve parameters before the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parametrization {
    /// Resample the closed polygon at `max(256, 8N)` points equally spaced
    /// by arclength.
    #[default]
    Arclength,
    /// Take point `j` of `n` to sit at parameter `2πj/n` and transform the
    /// points as given. Exact for band-limited samples with `n > 2N`.
    Uniform,
}

/// Fits a Fourier curve of cutoff `cutoff` to a closed polygon, resampled
/// uniformly by arclength.
pub fn fit_from_points(points: &[Complex64], cutoff: usize) -> Result<Curve> {
    fit_from_points_with(points, cutoff, Parametrization::Arclength)
}

pub fn fit_from_points_with(
    points: &[Complex64],
    cutoff: usize,
    param: Parametrization,
) -> Result<Curve> {
    if cutoff == 0 {
        return Err(Error::InvalidCurve("cutoff must be positive".into()));
    }
    let mut points = points;
    // A repeated closing point carries no information.
    if points.len() > 1 && points.first() == points.last() {
        points = &points[..points.len() - 1];
    }
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            got: points.len(),
            need: MIN_FIT_POINTS,
        });
    }
    if points
        .iter()
        .any(|p| !p.re.is_finite() || !p.im.is_finite())
    {
        return Err(Error::DegenerateInput("non-finite point".into()));
    }
    let total = polygon_length(points);
    if total < LENGTH_EPS {
        return Err(Error::DegenerateInput(format!(
            "polygon length {total:e} below {LENGTH_EPS:e}"
        )));
    }
    let samples = match param {
        Parametrization::Arclength => {
            let m = (8 * cutoff).max(256);
            resample_by_arclength(points, m, total)
        }
        Parametrization::Uniform => {
            if points.len() <= 2 * cutoff {
                return Err(Error::TooFewPoints {
                    got: points.len(),
                    need: 2 * cutoff + 1,
                });
            }
            points.to_vec()
        }
    };
    Curve::new(cutoff, dft_coefficients(&samples, cutoff))
}

fn polygon_length(points: &[Complex64]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| (points[(i + 1) % n] - points[i]).norm())
        .sum()
}

fn resample_by_arclength(points: &[Complex64], m: usize, total: f64) -> Vec<Complex64> {
    let n = points.len();
    let mut out = Vec::with_capacity(m);
    let mut edge = 0;
    let mut edge_start = 0.0;
    let mut edge_len = (points[1 % n] - points[0]).norm();
    for j in 0..m {
        let target = total * j as f64 / m as f64;
        while edge_start + edge_len < target && edge < n - 1 {
            edge_start += edge_len;
            edge += 1;
            edge_len = (points[(edge + 1) % n] - points[edge]).norm();
        }
        let a = points[edge];
        let b = points[(edge + 1) % n];
        let t = if edge_len > 0.0 {
            ((target - edge_start) / edge_len).clamp(0.0, 1.0)
        } else {
            0.0
        };
        out.push(a + (b - a) * t);
    }
    out
}

/// `c_k = (1/M) Σ_j p_j e^{-2πi jk/M}` for `|k| ≤ cutoff`, dense from `-cutoff`.
fn dft_coefficients(samples: &[Complex64], cutoff: usize) -> Vec<Complex64> {
    let m = samples.len();
    let n = cutoff as i64;
    (-n..=n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, p) in samples.iter().enumerate() {
                // Reduce jk mod m before scaling so the phase stays exact for large indices.
                let idx = (j as i64 * k).rem_euclid(m as i64);
                acc += p * Complex64::from_polar(1.0, -TAU * idx as f64 / m as f64);
            }
            acc / m as f64
        })
        .collect()
}
