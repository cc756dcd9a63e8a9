// SPDX-License-Identifier: MIT OR Apache-2.0

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Aspect angle as a function of the rectangle's diagonal length `r`.
///
/// Wire form: `{"kind":"constant","value":φ}`,
/// `{"kind":"polynomial","coeffs":[a0,a1,...]}` for `φ(r) = Σ aᵢ rⁱ`, or
/// `{"kind":"table","points":[[r,φ],...]}` interpolated linearly and held
/// constant outside the table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "RawProfile")]
pub enum AspectProfile {
    Constant { value: f64 },
    Polynomial { coeffs: Vec<f64> },
    Table { points: Vec<(f64, f64)> },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawProfile {
    Constant { value: f64 },
    Polynomial { coeffs: Vec<f64> },
    Table { points: Vec<(f64, f64)> },
}

impl TryFrom<RawProfile> for AspectProfile {
    type Error = Error;

    fn try_from(raw: RawProfile) -> Result<Self> {
        match raw {
            RawProfile::Constant { value } => AspectProfile::constant(value),
            RawProfile::Polynomial { coeffs } => AspectProfile::polynomial(coeffs),
            RawProfile::Table { points } => AspectProfile::table(points),
        }
    }
}

fn in_open_range(value: f64) -> bool {
    value > 0.0 && value < PI
}

impl AspectProfile {
    pub fn constant(value: f64) -> Result<Self> {
        if !in_open_range(value) {
            return Err(Error::ProfileOutOfRange { r: 0.0, value });
        }
        Ok(AspectProfile::Constant { value })
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidProfile(
                "polynomial needs at least one coefficient".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidProfile("non-finite coefficient".into()));
        }
        Ok(AspectProfile::Polynomial { coeffs })
    }

    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidProfile(
                "table needs at least one point".into(),
            ));
        }
        if points.iter().any(|(r, v)| !r.is_finite() || !v.is_finite()) {
            return Err(Error::InvalidProfile("non-finite table entry".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidProfile(
                "table r-values must be strictly increasing".into(),
            ));
        }
        Ok(AspectProfile::Table { points })
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, AspectProfile::Constant { .. })
    }

    /// `φ(r)`, checked to lie in `(0, π)`.
    pub fn value(&self, r: f64) -> Result<f64> {
        Ok(self.value_and_slope(r)?.0)
    }

    /// `(φ(r), φ′(r))`. The slope of a table is the slope of the segment
    /// containing `r`, and zero outside the table.
    pub fn value_and_slope(&self, r: f64) -> Result<(f64, f64)> {
        let (value, slope) = match self {
            AspectProfile::Constant { value } => (*value, 0.0),
            AspectProfile::Polynomial { coeffs } => {
                // Horner for the value and the derivative together.
                let mut value = 0.0;
                let mut slope = 0.0;
                for &a in coeffs.iter().rev() {
                    slope = slope * r + value;
                    value = value * r + a;
                }
                (value, slope)
            }
            AspectProfile::Table { points } => table_lookup(points, r),
        };
        if !in_open_range(value) {
            return Err(Error::ProfileOutOfRange { r, value });
        }
        Ok((value, slope))
    }

    /// Checks `φ ∈ (0, π)` on a dense sampling of `[0, r_max]` (and at every
    /// table knot in range).
    pub fn check_domain(&self, r_max: f64) -> Result<()> {
        const SAMPLES: usize = 256;
        for j in 0..=SAMPLES {
            self.value(r_max * j as f64 / SAMPLES as f64)?;
        }
        if let AspectProfile::Table { points } = self {
            for &(r, _) in points.iter().filter(|(r, _)| *r >= 0.0 && *r <= r_max) {
                self.value(r)?;
            }
        }
        Ok(())
    }
}

fn table_lookup(points: &[(f64, f64)], r: f64) -> (f64, f64) {
    let first = points[0];
    let last = points[points.len() - 1];
    if r <= first.0 {
        return (first.1, 0.0);
    }
    if r >= last.0 {
        return (last.1, 0.0);
    }
    // First knot strictly greater than r; r lies in [points[i-1].0, points[i].0).
    let i = points.partition_point(|&(x, _)| x <= r);
    let (r0, v0) = points[i - 1];
    let (r1, v1) = points[i];
    let slope = (v1 - v0) / (r1 - r0);
    (v0 + slope * (r - r0), slope)
}
