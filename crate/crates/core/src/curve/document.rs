// SPDX-License-Identifier: MIT OR Apache-2.0

//! The curve file format:
//!
//! ```json
//! {"type": "fourier", "n": 1, "coeffs": [[-1, 0.0, 0.0], [0, 0.0, 0.0], [1, 1.0, 0.0]]}
//! ```
//!
//! Entries are `[k, re, im]`. Missing harmonics are zero; duplicate `k` and
//! `|k| > n` are rejected. Serialization always writes every `k` in order.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Curve;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDocument {
    #[serde(rename = "type")]
    pub kind: String,
    pub n: usize,
    pub coeffs: Vec<(i64, f64, f64)>,
}

impl CurveDocument {
    pub fn from_curve(curve: &Curve) -> Self {
        CurveDocument {
            kind: "fourier".into(),
            n: curve.cutoff(),
            coeffs: curve.terms().map(|(k, c)| (k, c.re, c.im)).collect(),
        }
    }

    /// Checks the document's constraints and builds the curve.
    pub fn to_curve(&self) -> Result<Curve> {
        if self.kind != "fourier" {
            return Err(Error::InvalidCurve(format!(
                "unsupported curve type `{}`",
                self.kind
            )));
        }
        let terms: Vec<(i64, Complex64)> = self
            .coeffs
            .iter()
            .map(|&(k, re, im)| (k, Complex64::new(re, im)))
            .collect();
        Curve::from_terms(self.n, &terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("curve document serializes")
    }
}

/// Parses a curve document. Syntax errors carry the line and column reported
/// by the JSON reader; constraint violations point at the `coeffs` field.
pub fn parse_document(text: &str) -> Result<Curve> {
    let doc: CurveDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.to_curve().map_err(|e| {
        let (line, column) = locate(text, "\"coeffs\"");
        Error::Parse {
            line,
            column,
            message: e.to_string(),
        }
    })
}

fn locate(text: &str, needle: &str) -> (usize, usize) {
    let Some(offset) = text.find(needle) else {
        return (1, 1);
    };
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = offset - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}
