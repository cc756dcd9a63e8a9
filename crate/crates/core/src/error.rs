// SPDX-License-Identifier: MIT OR Apache-2.0

use thiserror::Error;

/// Errors produced by the curve, geometry and solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("too few points: got {got}, need at least {need}")]
    TooFewPoints { got: usize, need: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("aspect profile evaluates to {value} at r = {r}, outside (0, pi)")]
    ProfileOutOfRange { r: f64, value: f64 },

    #[error("invalid aspect profile: {0}")]
    InvalidProfile(String),

    #[error("point too close to the axis w = 0 (|w| = {radius:e}, r_min = {r_min:e})")]
    TooCloseToAxis { radius: f64, r_min: f64 },

    #[error("degenerate tangent at s = {s} (speed {speed:e})")]
    DegenerateTangent { s: f64, speed: f64 },

    #[error("degenerate rectangle (half-diagonal {half_diag:e} below r_min {r_min:e})")]
    DegenerateRectangle { half_diag: f64, r_min: f64 },

    #[error("not converged (residual {residual:e} after {iterations} iterations)")]
    NotConverged { residual: f64, iterations: usize },

    #[error("converged onto the degenerate diagonal branch (half-diagonal {half_diag:e})")]
    ConvergedDegenerate { half_diag: f64 },

    #[error("no solution found with pair_grid = {pair_grid}")]
    NoSolutionFound { pair_grid: usize },

    #[error("rectangle side lengths must be positive (p = {p}, q = {q})")]
    NonpositiveSide { p: f64, q: f64 },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
