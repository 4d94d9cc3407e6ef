//! Command-line front end. The binary only forwards to [`run`].
//!
//! Exit codes: 0 success, 1 input or usage error, 2 representation or
//! certification failure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::cubic_io::json::parse_request;
use crate::cubic_io::{CubicIoError, CubicSurface};
use crate::numerics::{MAX_PRECISION_BITS, MIN_PRECISION_BITS};
use crate::pipeline::{canon, represent, verify_file, CertificateJson, Options, PipelineError, RepresentReport};
use crate::quaternary_builder::D11Branch;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cubic-pfaffian", version, about = "Linear Pfaffian representations of cubic surfaces")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Working precision in bits.
    #[arg(long, global = true, env = "PFAFF_PRECISION_BITS", default_value_t = 256,
          value_parser = clap::value_parser!(u32).range(MIN_PRECISION_BITS as i64..=MAX_PRECISION_BITS as i64))]
    pub precision_bits: u32,
    /// Relative certification bound (default 2^(-P/2)).
    #[arg(long, global = true)]
    pub cert_eps: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, value_enum, default_value_t = BranchArg::Plus)]
    pub d11_branch: BranchArg,
    /// Rotation attempts before looking for a plane component.
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_rotations: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build and certify a representation.
    Represent(RepresentArgs),
    /// Certify matrices from a JSON file against a cubic.
    Verify {
        #[arg(long)]
        matrices: PathBuf,
        #[arg(long)]
        cubic: String,
    },
    /// Analyse the y = 0 section only.
    Canon {
        #[arg(long)]
        cubic: String,
    },
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["cubic", "theta_file", "batch"])))]
pub struct RepresentArgs {
    #[arg(long)]
    pub cubic: Option<String>,
    /// JSON request: {"cubic": "<expr>" | {"theta": [[re, im] x 20]}, ...}.
    #[arg(long)]
    pub theta_file: Option<PathBuf>,
    /// One JSON request per line.
    #[arg(long)]
    pub batch: Option<PathBuf>,
    /// Worker threads for --batch (default: all processors).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Include per-stage timings in the report.
    #[arg(long)]
    pub timings: bool,
}

impl Config {
    pub fn options(&self) -> Options {
        Options {
            precision_bits: self.precision_bits,
            cert_eps: self.cert_eps,
            seed: self.seed,
            d11_branch: match self.d11_branch {
                BranchArg::Plus => D11Branch::Plus,
                BranchArg::Minus => D11Branch::Minus,
            },
            max_rotations: self.max_rotations as usize,
            ..Options::default()
        }
    }
}

fn exit_code(e: &PipelineError) -> i32 {
    match e {
        PipelineError::RepresentationFailed { .. } => EXIT_FAILED,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Represent(a) => cmd_represent(&cli.config, a, out, err),
        Command::Verify { matrices, cubic } => cmd_verify(&cli.config, matrices, cubic, out),
        Command::Canon { cubic } => cmd_canon(&cli.config, cubic, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read(path: &PathBuf) -> Result<String, PipelineError> {
    std::fs::read_to_string(path)
        .map_err(|e| PipelineError::Input(CubicIoError::Json(format!("cannot read {}: {e}", path.display()))))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report serializes")
}

fn emit(report: &RepresentReport, format: Format, out: &mut dyn Write) {
    let _ = match format {
        Format::Json => writeln!(out, "{}", to_json(report)),
        Format::Text => write!(out, "{}", report.render_text()),
    };
}

fn represent_one(
    request_text: Option<&str>,
    expr: Option<&str>,
    opts: &Options,
    timings: bool,
) -> Result<RepresentReport, PipelineError> {
    let (surface, opts) = match (request_text, expr) {
        (Some(text), _) => {
            let req = parse_request(text)?;
            let opts = Options {
                precision_bits: req.precision_bits.unwrap_or(opts.precision_bits),
                seed: req.seed.unwrap_or(opts.seed),
                ..opts.clone()
            };
            (req.cubic.to_surface(opts.precision_bits)?, opts)
        }
        (None, Some(e)) => (CubicSurface::parse(e, opts.precision_bits)?, opts.clone()),
        (None, None) => unreachable!("clap requires an input"),
    };
    let r = represent(&surface, &opts)?;
    Ok(RepresentReport::new(&r, timings))
}

#[derive(Serialize)]
struct BatchError {
    index: usize,
    error: String,
    exit_code: i32,
}

#[derive(Serialize)]
struct BatchSummary {
    total: usize,
    passed: usize,
    input_errors: usize,
    failed: usize,
}

fn cmd_represent(
    config: &Config,
    a: &RepresentArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, PipelineError> {
    let opts = config.options();
    if let Some(path) = &a.batch {
        return Ok(run_batch(&read(path)?, &opts, a, config.format, out, err));
    }
    let report = match &a.theta_file {
        Some(p) => represent_one(Some(&read(p)?), None, &opts, a.timings)?,
        None => represent_one(None, a.cubic.as_deref(), &opts, a.timings)?,
    };
    emit(&report, config.format, out);
    Ok(EXIT_OK)
}

fn run_batch(
    text: &str,
    opts: &Options,
    a: &RepresentArgs,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .collect();
    let work = || -> Vec<Result<RepresentReport, PipelineError>> {
        lines
            .par_iter()
            .map(|&(i, line)| {
                let o = Options {
                    seed: opts.seed.wrapping_add(i as u64),
                    ..opts.clone()
                };
                represent_one(Some(line), None, &o, a.timings)
            })
            .collect()
    };
    let results = match rayon::ThreadPoolBuilder::new().num_threads(a.jobs.unwrap_or(0)).build() {
        Ok(pool) => pool.install(work),
        Err(e) => {
            let _ = writeln!(err, "warning: worker pool unavailable ({e}); running on the global pool");
            work()
        }
    };
    let mut summary = BatchSummary {
        total: results.len(),
        passed: 0,
        input_errors: 0,
        failed: 0,
    };
    for (index, r) in results.iter().enumerate() {
        match r {
            Ok(report) => {
                summary.passed += 1;
                match format {
                    Format::Json => {
                        let _ = writeln!(out, "{}", serde_json::to_string(report).expect("serializes"));
                    }
                    Format::Text => {
                        let _ = write!(out, "[{index}]\n{}", report.render_text());
                    }
                }
            }
            Err(e) => {
                let code = exit_code(e);
                if code == EXIT_FAILED {
                    summary.failed += 1;
                } else {
                    summary.input_errors += 1;
                }
                let record = BatchError {
                    index,
                    error: e.to_string(),
                    exit_code: code,
                };
                let _ = match format {
                    Format::Json => writeln!(out, "{}", serde_json::to_string(&record).expect("serializes")),
                    Format::Text => writeln!(out, "[{index}] error: {e}"),
                };
            }
        }
    }
    let _ = match format {
        Format::Json => writeln!(out, "{}", serde_json::json!({ "summary": summary })),
        Format::Text => writeln!(
            out,
            "summary: {} total, {} passed, {} input errors, {} failed",
            summary.total, summary.passed, summary.input_errors, summary.failed
        ),
    };
    if summary.failed > 0 {
        EXIT_FAILED
    } else if summary.input_errors > 0 {
        EXIT_INPUT
    } else {
        EXIT_OK
    }
}

fn cmd_verify(config: &Config, matrices: &PathBuf, cubic: &str, out: &mut dyn Write) -> Result<i32, PipelineError> {
    let opts = config.options();
    let tol = opts.tolerance()?;
    let surface = CubicSurface::parse(cubic, opts.precision_bits)?;
    let cert = verify_file(&read(matrices)?, &surface, &tol, opts.samples, opts.seed)?;
    let json = CertificateJson::new(&cert);
    let _ = match config.format {
        Format::Json => writeln!(out, "{}", to_json(&serde_json::json!({ "certificate": json }))),
        Format::Text => writeln!(
            out,
            "{}: pf {:e}, det {:e}, consistency {:e}, samples {:e} (cert_eps {:e})",
            if json.pass { "pass" } else { "FAIL" },
            json.pf_residual,
            json.det_residual,
            json.consistency_residual,
            json.sample_residual,
            json.cert_eps
        ),
    };
    Ok(if cert.pass { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_canon(config: &Config, cubic: &str, out: &mut dyn Write) -> Result<i32, PipelineError> {
    let opts = config.options();
    let tol = opts.tolerance()?;
    let surface = CubicSurface::parse(cubic, opts.precision_bits)?;
    let report = canon(&surface, &tol, opts.seed)?;
    let _ = match config.format {
        Format::Json => writeln!(out, "{}", to_json(&report)),
        Format::Text => write!(out, "{}", report.render_text()),
    };
    Ok(EXIT_OK)
}
