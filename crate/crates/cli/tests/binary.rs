// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use axum::body::{to_bytes, Body};
use axum::http::Request;
use serde_json::{json, Value};
use tower::ServiceExt;

use rectpeg_cli::server::router;

fn rectpeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rectpeg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn cli_records(args: &[&str], dir: &Path) -> String {
    let out = dir.join("records.ndjson");
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", out.to_str().unwrap()]);
    let output = rectpeg(&full);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    std::fs::read_to_string(out).unwrap()
}

async fn api_body(path: &str, body: Value) -> String {
    let req = Request::post(path)
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = router(None).oneshot(req).await.unwrap();
    assert!(resp.status().is_success());
    let bytes = to_bytes(resp.into_body(), 64 << 20).await.unwrap();
    String::from_utf8(bytes.to_vec()).unwrap()
}

#[tokio::test]
async fn solve_records_match_the_api_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let records = cli_records(&["solve", "--curve", "bean", "--phi", "1.2"], dir.path());
    let body = api_body(
        "/api/solve",
        json!({"curve": {"preset": "bean"}, "phi": 1.2}),
    )
    .await;
    let lines: Vec<&str> = records.lines().collect();
    assert!(!lines.is_empty());
    for line in &lines {
        assert!(body.contains(line), "{line}");
    }
    let api: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(api["solutions"].as_array().unwrap().len(), lines.len());
}

#[tokio::test]
async fn porism_and_verify_records_match_the_api() {
    let dir = tempfile::tempdir().unwrap();
    let profile = json!({"kind": "polynomial", "coeffs": [0.785, 0.125, -0.015625]});
    let profile_path = dir.path().join("profile.json");
    std::fs::write(&profile_path, profile.to_string()).unwrap();
    let records = cli_records(
        &[
            "porism",
            "--curve",
            "perturbed-circle(2)",
            "--profile",
            profile_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    let body = api_body(
        "/api/porism",
        json!({"curve": {"preset": "perturbed-circle(2)"}, "profile": profile}),
    )
    .await;
    assert!(records.lines().count() > 0);
    for line in records.lines() {
        assert!(body.contains(line), "{line}");
    }

    let records = cli_records(&["verify", "--curve", "rounded-rectangle"], dir.path());
    let body = api_body(
        "/api/verify",
        json!({"curve": {"preset": "rounded-rectangle"}}),
    )
    .await;
    for line in records.lines() {
        assert!(body.contains(line), "{line}");
    }
}

#[tokio::test]
async fn sweep_lines_match_the_api_stream() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sweep",
        "--curve",
        "ellipse(2,1)",
        "--phi-lo",
        "0.7",
        "--phi-hi",
        "1.3",
        "--steps",
        "5",
    ];
    let records = cli_records(&args, dir.path());
    let body = api_body(
        "/api/sweep",
        json!({"curve": {"preset": "ellipse(2,1)"}, "phi_lo": 0.7, "phi_hi": 1.3, "steps": 5}),
    )
    .await;
    let streamed: Vec<&str> = body.lines().collect();
    let written: Vec<&str> = records.lines().collect();
    assert_eq!(written.len(), 5);
    assert_eq!(&streamed[..5], &written[..]);
    assert!(streamed[5].starts_with("{\"result\":"));
}

#[test]
fn curve_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("circle.json");
    std::fs::write(&path, r#"{"type":"fourier","n":1,"coeffs":[[1,1.0,0.0]]}"#).unwrap();
    let output = rectpeg(&[
        "solve",
        "--curve",
        path.to_str().unwrap(),
        "--phi",
        "1.0",
        "--json",
    ]);
    assert!(output.status.success());
    let result: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(result["mode"], "solve");
    assert_eq!(result["solutions"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes() {
    let ok = rectpeg(&["solve", "--curve", "circle", "--phi", "1.0"]);
    assert_eq!(ok.status.code(), Some(0));

    let job_error = rectpeg(&["solve", "--curve", "no-such-curve", "--phi", "1.0"]);
    assert_eq!(job_error.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&job_error.stderr);
    assert!(stderr.contains("solve: unknown preset"), "{stderr}");

    let out_of_range = rectpeg(&["solve", "--curve", "circle", "--phi", "2.0"]);
    assert_eq!(out_of_range.status.code(), Some(1));

    let usage = rectpeg(&["solve", "--phi", "1.0"]);
    assert_eq!(usage.status.code(), Some(2));
    let usage = rectpeg(&["frobnicate"]);
    assert_eq!(usage.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eight.json");
    std::fs::write(
        &path,
        r#"{"type":"fourier","n":2,"coeffs":[[-2,0.0,0.5],[-1,-0.5,0.0],[1,0.5,0.0],[2,0.0,-0.5]]}"#,
    )
    .unwrap();
    let failed = rectpeg(&["verify", "--curve", path.to_str().unwrap()]);
    assert_eq!(failed.status.code(), Some(3));
    let invalid = rectpeg(&["solve", "--curve", path.to_str().unwrap(), "--phi", "1.0"]);
    assert_eq!(invalid.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&invalid.stderr).contains("not simple"));

    let bad_file = dir.path().join("bad.json");
    std::fs::write(&bad_file, "{\"type\": \"fourier\",\n \"n\": }").unwrap();
    let parse = rectpeg(&[
        "solve",
        "--curve",
        bad_file.to_str().unwrap(),
        "--phi",
        "1.0",
    ]);
    assert_eq!(parse.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 2"));
}

#[test]
fn help_exits_cleanly() {
    let help = rectpeg(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    let text = String::from_utf8_lossy(&help.stdout);
    for verb in ["solve", "sweep", "porism", "oracle", "verify", "serve"] {
        assert!(text.contains(verb), "{verb}");
    }
}
