// SPDX-License-Identifier: MIT OR Apache-2.0

//! Smooth Jordan curves stored as truncated complex Fourier series.
//!
//! A curve with cutoff `N` is the trigonometric polynomial
//! `γ(s) = Σ_{k=-N}^{N} c_k e^{iks}` on `s ∈ [0, 2π)`. Such a curve is closed
//! and smooth by construction; immersion and simplicity are checked
//! numerically by [`validate`].

mod document;
mod fit;
mod presets;
mod validate;

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use document::{parse_document, CurveDocument};
pub use fit::{fit_from_points, fit_from_points_with, Parametrization, DEFAULT_FIT_CUTOFF};
pub use presets::{preset, PRESET_NAMES};
pub use validate::{validate, CurveValidityReport, DEFAULT_VALIDATION_SAMPLES};

/// Number of samples used to estimate the curve diameter.
const DIAMETER_SAMPLES: usize = 512;

/// Immersion threshold relative to the curve diameter.
pub const IMMERSION_EPS_REL: f64 = 1e-6;
/// Minimum total polygon length accepted by the fitter.
pub const LENGTH_EPS: f64 = 1e-9;

/// A closed plane curve `γ(s) = Σ c_k e^{iks}`, `|k| ≤ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    cutoff: usize,
    // c_k stored at index k + cutoff.
    coeffs: Vec<Complex64>,
    diameter: f64,
}

impl Curve {
    /// Builds a curve from the dense coefficient list `c_{-N}, ..., c_N`.
    pub fn new(cutoff: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::InvalidCurve("cutoff must be positive".into()));
        }
        if coeffs.len() != 2 * cutoff + 1 {
            return Err(Error::InvalidCurve(format!(
                "expected {} coefficients for cutoff {}, got {}",
                2 * cutoff + 1,
                cutoff,
                coeffs.len()
            )));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidCurve("non-finite coefficient".into()));
        }
        let mut curve = Curve {
            cutoff,
            coeffs,
            diameter: 0.0,
        };
        curve.diameter = curve.sampled_diameter();
        Ok(curve)
    }

    /// Builds a curve from sparse `(k, c_k)` entries. Duplicate `k` and
    /// `|k| > cutoff` are rejected.
    pub fn from_terms(cutoff: usize, terms: &[(i64, Complex64)]) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * cutoff + 1];
        let mut seen = vec![false; 2 * cutoff + 1];
        for &(k, c) in terms {
            if k.unsigned_abs() as usize > cutoff {
                return Err(Error::InvalidCurve(format!(
                    "harmonic {k} exceeds cutoff {cutoff}"
                )));
            }
            let idx = (k + cutoff as i64) as usize;
            if seen[idx] {
                return Err(Error::InvalidCurve(format!("duplicate harmonic {k}")));
            }
            seen[idx] = true;
            coeffs[idx] = c;
        }
        Curve::new(cutoff, coeffs)
    }

    /// Unit circle `γ(s) = e^{is}`.
    pub fn circle() -> Self {
        Curve::from_terms(1, &[(1, Complex64::new(1.0, 0.0))]).expect("valid circle")
    }

    /// Axis-aligned ellipse with semi-axes `a` (along x) and `b` (along y).
    pub fn ellipse(a: f64, b: f64) -> Self {
        Curve::from_terms(
            1,
            &[
                (1, Complex64::new((a + b) / 2.0, 0.0)),
                (-1, Complex64::new((a - b) / 2.0, 0.0)),
            ],
        )
        .expect("valid ellipse")
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Coefficient `c_k`; zero outside `|k| ≤ N`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.cutoff {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(k + self.cutoff as i64) as usize]
    }

    /// Dense coefficients `c_{-N}, ..., c_N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Iterator over `(k, c_k)` for `k = -N..=N`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.cutoff as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - n, c))
    }

    /// Maximum pairwise distance over a fixed dense sampling.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// `γ(s)`.
    pub fn evaluate(&self, s: f64) -> Complex64 {
        self.evaluate_with_derivative(s).0
    }

    /// `γ′(s) = Σ ik c_k e^{iks}`.
    pub fn derivative(&self, s: f64) -> Complex64 {
        self.evaluate_with_derivative(s).1
    }

    /// `(γ(s), γ′(s))` in one pass over the coefficients.
    pub fn evaluate_with_derivative(&self, s: f64) -> (Complex64, Complex64) {
        let s = s.rem_euclid(TAU);
        let n = self.cutoff;
        let base = Complex64::from_polar(1.0, s);
        let base_inv = base.conj();
        let c0 = self.coeffs[n];
        let mut value = c0;
        let mut deriv = Complex64::new(0.0, 0.0);
        let mut pos = Complex64::new(1.0, 0.0);
        let mut neg = Complex64::new(1.0, 0.0);
        for k in 1..=n {
            pos *= base;
            neg *= base_inv;
            let cp = self.coeffs[n + k] * pos;
            let cn = self.coeffs[n - k] * neg;
            value += cp + cn;
            // d/ds c e^{iks} = ik c e^{iks}
            deriv += Complex64::new(0.0, k as f64) * (cp - cn);
        }
        (value, deriv)
    }

    /// `γ(2πj/n)` for `j = 0..n`.
    pub fn sample(&self, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|j| self.evaluate(TAU * j as f64 / n as f64))
            .collect()
    }

    /// The curve multiplied by `e^{iα}` (rotation about the origin).
    pub fn rotated(&self, alpha: f64) -> Self {
        let rot = Complex64::from_polar(1.0, alpha);
        Curve::new(self.cutoff, self.coeffs.iter().map(|&c| c * rot).collect())
            .expect("rotation preserves validity")
    }

    /// The curve translated by `offset`.
    pub fn translated(&self, offset: Complex64) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[self.cutoff] += offset;
        Curve::new(self.cutoff, coeffs).expect("translation preserves validity")
    }

    /// Immersion threshold `imm_eps = 1e-6 · diameter`.
    pub fn immersion_eps(&self) -> f64 {
        IMMERSION_EPS_REL * self.diameter
    }

    fn sampled_diameter(&self) -> f64 {
        let pts = self.sample(DIAMETER_SAMPLES);
        let mut best = 0.0f64;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                best = best.max((a - b).norm());
            }
        }
        best
    }
}
