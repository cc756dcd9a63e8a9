// SPDX-License-Identifier: MIT OR Apache-2.0

//! Job requests and their dispatch to the solver. The command line and the
//! HTTP server both go through [`prepare`] and [`execute`].

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use rectpeg_core::audit::{verify_curve, VerifyReport};
use rectpeg_core::curve::{
    fit_from_points, parse_document, preset, validate, Curve, CurveDocument, CurveValidityReport,
    DEFAULT_FIT_CUTOFF, DEFAULT_VALIDATION_SAMPLES,
};
use rectpeg_core::solver::{
    check_phi, oracle_clusters, oracle_solve, solve_all_with_retry, solve_porism_with_retry,
    sweep_with, Attempt, BranchLink, OracleHit, SolverConfig, SweepEntry, SweepResult,
};
use rectpeg_core::system::{AspectProfile, RectangleSolution};
use rectpeg_core::Error;

pub const DEFAULT_ORACLE_GRID: usize = 256;
pub const DEFAULT_ORACLE_SLACK: f64 = 0.05;
const MIN_ORACLE_GRID: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Solve,
    Sweep,
    Porism,
    Verify,
    Oracle,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Mode::Solve => "solve",
            Mode::Sweep => "sweep",
            Mode::Porism => "porism",
            Mode::Verify => "verify",
            Mode::Oracle => "oracle",
        };
        f.write_str(name)
    }
}

/// Exactly one way of naming a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveSource {
    Document(CurveDocument),
    Preset(String),
    Points {
        points: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cutoff: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobRequest {
    pub curve: CurveSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<AspectProfile>,
    /// Oracle grid size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Oracle slack.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<SolverConfig>,
}

impl JobRequest {
    pub fn new(curve: CurveSource, mode: Mode) -> Self {
        JobRequest {
            curve,
            mode: Some(mode),
            phi: None,
            phi_lo: None,
            phi_hi: None,
            steps: None,
            profile: None,
            grid: None,
            slack: None,
            config: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleOutput {
    pub hits: Vec<OracleHit>,
    pub clusters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobResult {
    pub mode: Mode,
    pub validity: CurveValidityReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<RectangleSolution>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleOutput>,
    pub config: SolverConfig,
    pub timings: Timings,
    pub warnings: Vec<String>,
}

impl JobResult {
    /// Whether the job found what it was asked for. Only `verify` can
    /// complete without succeeding.
    pub fn succeeded(&self) -> bool {
        self.verify.as_ref().is_none_or(|v| v.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    ParseError,
    ValidationFailed,
    TooFewPoints,
    DegenerateInput,
    UnknownPreset,
    InvalidCurve,
    InvalidProfile,
    ProfileOutOfRange,
    InvalidRequest,
    NoSolutionFound,
    Io,
    Internal,
}

/// A failed job: a machine-readable code, a message that names the mode,
/// and structured detail.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct JobError {
    pub code: ErrorCode,
    pub message: String,
    pub detail: Value,
}

/// Wire form of a [`JobError`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: ErrorCode,
    pub message: String,
    pub detail: Value,
}

impl JobError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        JobError {
            code,
            message: message.into(),
            detail: Value::Null,
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        JobError::new(ErrorCode::InvalidRequest, message)
    }

    /// Prefixes the message with the mode name.
    pub fn in_mode(mut self, mode: Mode) -> Self {
        self.message = format!("{mode}: {}", self.message);
        self
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody {
            code: self.code,
            message: self.message.clone(),
            detail: self.detail.clone(),
        }
    }
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (code, detail) = match &e {
            Error::TooFewPoints { got, need } => {
                (ErrorCode::TooFewPoints, json!({"got": got, "need": need}))
            }
            Error::DegenerateInput(_) => (ErrorCode::DegenerateInput, Value::Null),
            Error::UnknownPreset(name) => (ErrorCode::UnknownPreset, json!({"name": name})),
            Error::InvalidCurve(_) => (ErrorCode::InvalidCurve, Value::Null),
            Error::Parse { line, column, .. } => (
                ErrorCode::ParseError,
                json!({"line": line, "column": column}),
            ),
            Error::ProfileOutOfRange { r, value } => (
                ErrorCode::ProfileOutOfRange,
                json!({"r": r, "value": value}),
            ),
            Error::InvalidProfile(_) => (ErrorCode::InvalidProfile, Value::Null),
            Error::NoSolutionFound { pair_grid } => {
                (ErrorCode::NoSolutionFound, json!({"pair_grid": pair_grid}))
            }
            Error::InvalidConfig(_) | Error::NonpositiveSide { .. } => {
                (ErrorCode::InvalidRequest, Value::Null)
            }
            Error::TooCloseToAxis { .. }
            | Error::DegenerateTangent { .. }
            | Error::DegenerateRectangle { .. }
            | Error::NotConverged { .. }
            | Error::ConvergedDegenerate { .. } => (ErrorCode::Internal, Value::Null),
        };
        JobError {
            code,
            message,
            detail,
        }
    }
}

fn validation_error(report: &CurveValidityReport) -> JobError {
    let message = if !report.is_simple {
        let (s, t) = report.first_crossing.unwrap_or_default();
        format!("curve is not simple: crossing between s = {s:.6} and s = {t:.6}")
    } else {
        format!(
            "curve is not immersed: minimum speed {:e}",
            report.min_speed
        )
    };
    JobError {
        code: ErrorCode::ValidationFailed,
        message,
        detail: serde_json::to_value(report).expect("report serializes"),
    }
}

/// Parses a curve document and checks that it is an immersed Jordan curve.
pub fn parse_curve_file(text: &str) -> Result<(Curve, CurveValidityReport), JobError> {
    let curve = parse_document(text)?;
    let report = validate(&curve, DEFAULT_VALIDATION_SAMPLES);
    if !report.is_valid() {
        return Err(validation_error(&report));
    }
    Ok((curve, report))
}

/// Parses an aspect profile document. Syntax errors carry a position;
/// well-formed documents that describe no valid profile are `invalid_profile`.
pub fn parse_profile(text: &str) -> Result<AspectProfile, JobError> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        JobError::from(Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    })?;
    AspectProfile::deserialize(value).map_err(|e| JobError {
        code: ErrorCode::InvalidProfile,
        message: format!("invalid aspect profile: {e}"),
        detail: Value::Null,
    })
}

/// Fits a curve to raw points and reports its validity without rejecting it.
pub fn fit_points(
    points: &[[f64; 2]],
    cutoff: Option<usize>,
) -> Result<(Curve, CurveValidityReport), JobError> {
    let pts: Vec<Complex64> = points.iter().map(|[x, y]| Complex64::new(*x, *y)).collect();
    let curve = fit_from_points(&pts, cutoff.unwrap_or(DEFAULT_FIT_CUTOFF))?;
    let report = validate(&curve, DEFAULT_VALIDATION_SAMPLES);
    Ok((curve, report))
}

fn resolve_curve(source: &CurveSource) -> Result<(Curve, CurveValidityReport), JobError> {
    let curve = match source {
        CurveSource::Document(doc) => doc.to_curve()?,
        CurveSource::Preset(name) => preset(name)?,
        CurveSource::Points { points, cutoff } => fit_points(points, *cutoff)?.0,
    };
    let report = validate(&curve, DEFAULT_VALIDATION_SAMPLES);
    Ok((curve, report))
}

#[derive(Debug, Clone)]
enum Task {
    Solve { phi: f64 },
    Sweep { lo: f64, hi: f64, steps: usize },
    Porism { profile: AspectProfile },
    Verify,
    Oracle { phi: f64, grid: usize, slack: f64 },
}

/// A request whose curve has been built and whose parameters are complete.
#[derive(Debug, Clone)]
pub struct PreparedJob {
    pub mode: Mode,
    pub curve: Curve,
    pub validity: CurveValidityReport,
    pub config: SolverConfig,
    task: Task,
}

fn require<T>(value: Option<T>, name: &str) -> Result<T, JobError> {
    value.ok_or_else(|| JobError::invalid(format!("missing parameter `{name}`")))
}

fn finite(value: f64, name: &str) -> Result<f64, JobError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(JobError::invalid(format!("`{name}` must be finite")))
    }
}

/// Builds the curve, validates it, and checks the parameters the mode
/// needs. Every mode except `verify` rejects curves that fail validation.
pub fn prepare(req: &JobRequest) -> Result<PreparedJob, JobError> {
    let mode = req
        .mode
        .ok_or_else(|| JobError::invalid("missing `mode`"))?;
    prepare_inner(req, mode).map_err(|e| e.in_mode(mode))
}

fn prepare_inner(req: &JobRequest, mode: Mode) -> Result<PreparedJob, JobError> {
    let task = match mode {
        Mode::Solve => Task::Solve {
            phi: finite(require(req.phi, "phi")?, "phi")?,
        },
        Mode::Sweep => {
            let lo = require(req.phi_lo, "phi_lo")?;
            let hi = require(req.phi_hi, "phi_hi")?;
            let steps = require(req.steps, "steps")?;
            check_phi(lo)?;
            check_phi(hi)?;
            if lo >= hi {
                return Err(JobError::invalid(format!(
                    "phi_lo must be below phi_hi, got [{lo}, {hi}]"
                )));
            }
            if steps < 2 {
                return Err(JobError::invalid(format!(
                    "steps must be at least 2, got {steps}"
                )));
            }
            Task::Sweep { lo, hi, steps }
        }
        Mode::Porism => Task::Porism {
            profile: require(req.profile.clone(), "profile")?,
        },
        Mode::Verify => Task::Verify,
        Mode::Oracle => {
            let grid = req.grid.unwrap_or(DEFAULT_ORACLE_GRID);
            if grid < MIN_ORACLE_GRID {
                return Err(JobError::invalid(format!(
                    "oracle grid must be at least {MIN_ORACLE_GRID}, got {grid}"
                )));
            }
            let slack = finite(req.slack.unwrap_or(DEFAULT_ORACLE_SLACK), "slack")?;
            if slack < 0.0 {
                return Err(JobError::invalid("oracle slack must be non-negative"));
            }
            Task::Oracle {
                phi: finite(require(req.phi, "phi")?, "phi")?,
                grid,
                slack,
            }
        }
    };
    let (curve, validity) = resolve_curve(&req.curve)?;
    if mode != Mode::Verify && !validity.is_valid() {
        return Err(validation_error(&validity));
    }
    let config = req.config.clone().unwrap_or_default();
    config.resolve(&curve)?;
    Ok(PreparedJob {
        mode,
        curve,
        validity,
        config,
        task,
    })
}

fn retry_warning(attempt: &Attempt, first_grid: usize) -> Option<String> {
    attempt.retried.then(|| {
        format!(
            "no solution with pair_grid = {first_grid}; retried with pair_grid = {}",
            attempt.pair_grid
        )
    })
}

/// Runs a prepared job. `on_step` sees each sweep entry as it completes.
pub fn execute<F>(job: &PreparedJob, mut on_step: F) -> Result<JobResult, JobError>
where
    F: FnMut(&SweepEntry, &[BranchLink]),
{
    let start = Instant::now();
    let mut result = JobResult {
        mode: job.mode,
        validity: job.validity.clone(),
        solutions: None,
        sweep: None,
        verify: None,
        oracle: None,
        config: job.config.clone(),
        timings: Timings { total_ms: 0.0 },
        warnings: Vec::new(),
    };
    let cfg = &job.config;
    let mut run = || -> Result<(), JobError> {
        match &job.task {
            Task::Solve { phi } => {
                let attempt = solve_all_with_retry(&job.curve, *phi, cfg)?;
                result
                    .warnings
                    .extend(retry_warning(&attempt, cfg.pair_grid));
                result.solutions = Some(attempt.solutions);
            }
            Task::Porism { profile } => {
                let attempt = solve_porism_with_retry(&job.curve, profile, cfg)?;
                result
                    .warnings
                    .extend(retry_warning(&attempt, cfg.pair_grid));
                result.solutions = Some(attempt.solutions);
            }
            Task::Sweep { lo, hi, steps } => {
                let sweep = sweep_with(&job.curve, *lo, *hi, *steps, cfg, &mut on_step)?;
                for gap in sweep.gaps() {
                    result
                        .warnings
                        .push(format!("no solution at phi = {} after retry", gap.phi));
                }
                result.sweep = Some(sweep);
            }
            Task::Verify => {
                let report = verify_curve(&job.curve)?;
                for c in report.checks.iter().filter(|c| !c.passed) {
                    result.warnings.push(format!(
                        "check {} failed: {:e} (tolerance {:e})",
                        c.name, c.max_defect, c.tolerance
                    ));
                }
                result.verify = Some(report);
            }
            Task::Oracle { phi, grid, slack } => {
                let hits = oracle_solve(&job.curve, *phi, *grid, *slack);
                let square = (phi - std::f64::consts::FRAC_PI_2).abs() < 1e-12;
                let clusters = oracle_clusters(&hits, *grid, square).len();
                result.oracle = Some(OracleOutput { hits, clusters });
            }
        }
        Ok(())
    };
    run().map_err(|e| e.in_mode(job.mode))?;
    result.timings.total_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(result)
}

/// Prepares and executes `req`.
pub fn run(req: &JobRequest) -> Result<JobResult, JobError> {
    execute(&prepare(req)?, |_, _| {})
}

fn line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("record serializes")
}

/// One compact JSON line per result record: a solution, a sweep step, an
/// oracle hit, or a verification check.
pub fn records(result: &JobResult) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(sols) = &result.solutions {
        out.extend(sols.iter().map(line));
    }
    if let Some(sweep) = &result.sweep {
        for (k, e) in sweep.entries.iter().enumerate() {
            let links: Vec<BranchLink> = sweep
                .links
                .iter()
                .filter(|l| l.step == k)
                .copied()
                .collect();
            out.push(sweep_record(e, &links));
        }
    }
    if let Some(oracle) = &result.oracle {
        out.extend(oracle.hits.iter().map(line));
    }
    if let Some(verify) = &result.verify {
        out.extend(verify.checks.iter().map(line));
    }
    out
}

/// The record for one sweep step: the entry with its incoming links.
pub fn sweep_record(entry: &SweepEntry, links: &[BranchLink]) -> String {
    #[derive(Serialize)]
    struct Step<'a> {
        entry: &'a SweepEntry,
        links: &'a [BranchLink],
    }
    line(&Step { entry, links })
}
