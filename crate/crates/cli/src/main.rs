// SPDX-License-Identifier: MIT OR Apache-2.0

use std::fs;
use std::io::{self, BufWriter, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rectpeg_cli::job::{
    execute, parse_profile, prepare, records, sweep_record, CurveSource, ErrorCode, JobError,
    JobRequest, JobResult, Mode,
};
use rectpeg_core::curve::{parse_document, CurveDocument};
use rectpeg_core::SolverConfig;

const EXIT_JOB_ERROR: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "rectpeg",
    version,
    about = "Inscribed rectangles in smooth Jordan curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find every inscribed rectangle with a given diagonal angle.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Diagonal angle in radians, in (0, π/2].
        #[arg(long)]
        phi: f64,
    },
    /// Solve along a range of angles and link branches between steps.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phi_lo: f64,
        #[arg(long)]
        phi_hi: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Solve with an aspect angle that depends on the half-diagonal.
    Porism {
        #[command(flatten)]
        common: Common,
        /// Aspect profile JSON file.
        #[arg(long)]
        profile: PathBuf,
    },
    /// Brute-force search over chord pairs.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phi: f64,
        #[arg(long)]
        slack: Option<f64>,
    },
    /// Check the curve and the symplectic identities numerically.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Directory of static assets served at `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Curve document file, or a preset name such as `ellipse(2,1)`.
    #[arg(long)]
    curve: String,
    /// Residual acceptance tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Pair grid for the solver, or the sample count for `oracle`.
    #[arg(long)]
    grid: Option<usize>,
    /// Solver configuration JSON file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write line-delimited records to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the full result as one JSON document.
    #[arg(long)]
    json: bool,
}

fn read(path: &Path) -> Result<String, JobError> {
    fs::read_to_string(path).map_err(|e| {
        JobError::new(
            ErrorCode::Io,
            format!("cannot read {}: {e}", path.display()),
        )
    })
}

fn curve_source(arg: &str) -> Result<CurveSource, JobError> {
    let path = Path::new(arg);
    if path.is_file() {
        let curve = parse_document(&read(path)?)?;
        Ok(CurveSource::Document(CurveDocument::from_curve(&curve)))
    } else {
        Ok(CurveSource::Preset(arg.to_string()))
    }
}

fn request(common: &Common, mode: Mode) -> Result<JobRequest, JobError> {
    request_inner(common, mode).map_err(|e| e.in_mode(mode))
}

fn request_inner(common: &Common, mode: Mode) -> Result<JobRequest, JobError> {
    let mut req = JobRequest::new(curve_source(&common.curve)?, mode);
    let mut config = match &common.config {
        Some(path) => {
            let text = read(path)?;
            serde_json::from_str::<SolverConfig>(&text)
                .map_err(|e| JobError::invalid(format!("{}: {e}", path.display())))?
        }
        None => SolverConfig::default(),
    };
    if let Some(tol) = common.tol {
        config.accept_tol = Some(tol);
    }
    match (mode, common.grid) {
        (Mode::Oracle, grid) => req.grid = grid,
        (_, Some(grid)) => config.pair_grid = grid,
        _ => {}
    }
    req.config = Some(config);
    Ok(req)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, JobError> {
    match path {
        Some(p) => {
            let file = fs::File::create(p).map_err(|e| {
                JobError::new(ErrorCode::Io, format!("cannot create {}: {e}", p.display()))
            })?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

fn io_error(e: io::Error) -> JobError {
    JobError::new(ErrorCode::Io, format!("write failed: {e}"))
}

fn run_job(common: &Common, req: JobRequest) -> Result<JobResult, JobError> {
    let job = prepare(&req)?;
    let mut out = open_output(common.out.as_deref())?;
    let streaming = job.mode == Mode::Sweep && !common.json;
    let mut write_err = None;
    let result = execute(&job, |entry, links| {
        if streaming && write_err.is_none() {
            let res = writeln!(out, "{}", sweep_record(entry, links)).and_then(|_| out.flush());
            write_err = res.err();
        }
    })?;
    if let Some(e) = write_err {
        return Err(io_error(e));
    }
    if common.json {
        let text = serde_json::to_string_pretty(&result).expect("result serializes");
        writeln!(out, "{text}").map_err(io_error)?;
    } else if !streaming {
        for line in records(&result) {
            writeln!(out, "{line}").map_err(io_error)?;
        }
    }
    out.flush().map_err(io_error)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    Ok(result)
}

fn dispatch(command: Command) -> Result<ExitCode, JobError> {
    let (common, req) = match command {
        Command::Serve {
            port,
            host,
            static_dir,
        } => {
            let runtime = tokio::runtime::Runtime::new()
                .map_err(|e| JobError::new(ErrorCode::Internal, e.to_string()))?;
            runtime
                .block_on(rectpeg_cli::server::serve(
                    SocketAddr::new(host, port),
                    static_dir,
                ))
                .map_err(|e| JobError::new(ErrorCode::Io, format!("serve: {e}")))?;
            return Ok(ExitCode::SUCCESS);
        }
        Command::Solve { common, phi } => {
            let mut req = request(&common, Mode::Solve)?;
            req.phi = Some(phi);
            (common, req)
        }
        Command::Sweep {
            common,
            phi_lo,
            phi_hi,
            steps,
        } => {
            let mut req = request(&common, Mode::Sweep)?;
            req.phi_lo = Some(phi_lo);
            req.phi_hi = Some(phi_hi);
            req.steps = Some(steps);
            (common, req)
        }
        Command::Porism { common, profile } => {
            let mut req = request(&common, Mode::Porism)?;
            let parsed = read(&profile).and_then(|text| parse_profile(&text));
            req.profile = Some(parsed.map_err(|e| e.in_mode(Mode::Porism))?);
            (common, req)
        }
        Command::Oracle { common, phi, slack } => {
            let mut req = request(&common, Mode::Oracle)?;
            req.phi = Some(phi);
            req.slack = slack;
            (common, req)
        }
        Command::Verify { common } => {
            let req = request(&common, Mode::Verify)?;
            (common, req)
        }
    };
    let result = run_job(&common, req)?;
    if result.succeeded() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_VERIFY_FAILED))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            if !e.detail.is_null() {
                eprintln!("detail: {}", e.detail);
            }
            ExitCode::from(EXIT_JOB_ERROR)
        }
    }
}
