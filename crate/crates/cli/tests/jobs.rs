// SPDX-License-Identifier: MIT OR Apache-2.0

use std::f64::consts::FRAC_PI_2;

use serde_json::json;

use rectpeg_cli::job::{
    parse_curve_file, parse_profile, records, run, CurveSource, ErrorCode, JobRequest, JobResult,
    Mode,
};
use rectpeg_core::curve::Curve;
use rectpeg_core::system::AspectProfile;
use rectpeg_core::SolverConfig;

fn request(curve: CurveSource, mode: Mode) -> JobRequest {
    JobRequest::new(curve, mode)
}

#[test]
fn circle_document_parses() {
    let (curve, report) =
        parse_curve_file(r#"{"type":"fourier","n":1,"coeffs":[[1,1.0,0.0]]}"#).unwrap();
    assert_eq!(curve, Curve::circle());
    assert!(report.is_valid());
}

#[test]
fn duplicate_harmonics_are_parse_errors_with_position() {
    let text = "{\"type\": \"fourier\", \"n\": 2,\n  \"coeffs\": [[1, 1.0, 0.0], [1, 0.2, 0.0]]}";
    let err = parse_curve_file(text).unwrap_err();
    assert_eq!(err.code, ErrorCode::ParseError);
    assert_eq!(err.detail, json!({"line": 2, "column": 3}));
    assert!(err.message.contains("duplicate"), "{}", err.message);
}

#[test]
fn figure_eight_fails_validation_with_crossing() {
    let text = r#"{"type":"fourier","n":2,"coeffs":[[-2,0.0,0.5],[-1,-0.5,0.0],[1,0.5,0.0],[2,0.0,-0.5]]}"#;
    let err = parse_curve_file(text).unwrap_err();
    assert_eq!(err.code, ErrorCode::ValidationFailed);
    let crossing = err.detail["first_crossing"].as_array().unwrap();
    assert_eq!(crossing.len(), 2);
    assert!(err.message.contains("not simple"));
}

#[test]
fn circle_solve_at_right_angle_finds_one_square_family_member() {
    let mut req = request(CurveSource::Preset("circle".into()), Mode::Solve);
    req.phi = Some(FRAC_PI_2);
    let result = run(&req).unwrap();
    let sols = result.solutions.as_ref().unwrap();
    assert_eq!(sols.len(), 1);
    assert!((sols[0].half_diag - 1.0).abs() < 1e-9);
    assert!(sols[0].center.norm() < 1e-9);
    assert_eq!(records(&result).len(), 1);
}

#[test]
fn ellipse_verify_has_small_pullback_defect() {
    let result = run(&request(
        CurveSource::Preset("ellipse(2,1)".into()),
        Mode::Verify,
    ))
    .unwrap();
    let report = result.verify.as_ref().unwrap();
    assert!(report.passed);
    assert!(report.max_pullback_defect < 1e-8);
    assert!(result.succeeded());
    assert_eq!(records(&result).len(), report.checks.len());
}

#[test]
fn three_points_are_too_few_and_the_error_names_the_mode() {
    let source = CurveSource::Points {
        points: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
        cutoff: None,
    };
    let mut req = request(source, Mode::Solve);
    req.phi = Some(1.0);
    let err = run(&req).unwrap_err();
    assert_eq!(err.code, ErrorCode::TooFewPoints);
    assert_eq!(err.detail, json!({"got": 3, "need": 16}));
    assert!(
        err.message.starts_with("solve: too few points"),
        "{}",
        err.message
    );
}

#[test]
fn missing_parameters_are_invalid_requests() {
    let err = run(&request(CurveSource::Preset("circle".into()), Mode::Solve)).unwrap_err();
    assert_eq!(err.code, ErrorCode::InvalidRequest);
    assert_eq!(err.message, "solve: missing parameter `phi`");
    let mut req = request(CurveSource::Preset("circle".into()), Mode::Oracle);
    req.phi = Some(1.0);
    req.grid = Some(8);
    assert_eq!(run(&req).unwrap_err().code, ErrorCode::InvalidRequest);
}

#[test]
fn retry_is_reported_as_a_warning() {
    let mut req = request(CurveSource::Preset("ellipse(2,1)".into()), Mode::Solve);
    req.phi = Some(1.0);
    req.config = Some(SolverConfig {
        pair_grid: 32,
        angle_slack: 0.01,
        length_slack: 0.01,
        ..Default::default()
    });
    let result = run(&req).unwrap();
    assert!(!result.solutions.as_ref().unwrap().is_empty());
    assert_eq!(
        result.warnings,
        ["no solution with pair_grid = 32; retried with pair_grid = 64"]
    );

    req.config = Some(SolverConfig {
        pair_grid: 32,
        angle_slack: 0.0,
        length_slack: 0.0,
        ..Default::default()
    });
    let err = run(&req).unwrap_err();
    assert_eq!(err.code, ErrorCode::NoSolutionFound);
    assert_eq!(err.detail, json!({"pair_grid": 64}));
}

#[test]
fn oracle_counts_clusters() {
    let mut req = request(CurveSource::Preset("ellipse(2,1)".into()), Mode::Oracle);
    req.phi = Some(std::f64::consts::FRAC_PI_3);
    req.grid = Some(128);
    let result = run(&req).unwrap();
    let oracle = result.oracle.as_ref().unwrap();
    assert!(!oracle.hits.is_empty());
    assert_eq!(oracle.clusters, 2);
}

#[test]
fn job_results_round_trip_losslessly() {
    let mut solve = request(CurveSource::Preset("bean".into()), Mode::Solve);
    solve.phi = Some(1.1);
    let mut sweep = request(CurveSource::Preset("ellipse(2,1)".into()), Mode::Sweep);
    sweep.phi_lo = Some(0.8);
    sweep.phi_hi = Some(1.0);
    sweep.steps = Some(3);
    let mut porism = request(CurveSource::Preset("circle".into()), Mode::Porism);
    porism.profile = Some(AspectProfile::polynomial(vec![0.7, 0.1]).unwrap());
    let verify = request(
        CurveSource::Preset("rounded-rectangle".into()),
        Mode::Verify,
    );
    let mut oracle = request(CurveSource::Preset("circle".into()), Mode::Oracle);
    oracle.phi = Some(1.0);
    oracle.grid = Some(64);
    for req in [solve, sweep, porism, verify, oracle] {
        let result = run(&req).unwrap();
        let text = serde_json::to_string(&result).unwrap();
        let back: JobResult = serde_json::from_str(&text).unwrap();
        if req.mode != Some(Mode::Oracle) {
            assert_eq!(back, result, "{:?}", req.mode);
        }
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

#[test]
fn requests_round_trip_and_reject_unknown_fields() {
    let mut req = request(
        CurveSource::Points {
            points: vec![[1.0, 0.0], [0.0, 1.0]],
            cutoff: Some(3),
        },
        Mode::Porism,
    );
    req.profile = Some(AspectProfile::table(vec![(0.0, 0.5), (2.0, 1.0)]).unwrap());
    let text = serde_json::to_string(&req).unwrap();
    assert_eq!(serde_json::from_str::<JobRequest>(&text).unwrap(), req);
    let bad = r#"{"curve":{"preset":"circle"},"mode":"solve","phi":1,"tolerance":3}"#;
    assert!(serde_json::from_str::<JobRequest>(bad).is_err());
}

#[test]
fn profiles_parse_with_positions() {
    let p = parse_profile(r#"{"kind":"constant","value":1.0}"#).unwrap();
    assert_eq!(p, AspectProfile::constant(1.0).unwrap());
    let err = parse_profile("{\"kind\": \"constant\",\n \"value\": }").unwrap_err();
    assert_eq!(err.code, ErrorCode::ParseError);
    assert_eq!(err.detail["line"], 2);
    let err = parse_profile(r#"{"kind": "constant", "value": 4.0}"#).unwrap_err();
    assert_eq!(err.code, ErrorCode::InvalidProfile);
}
