//! Command-line front end of the `gma` binary.
//!
//! Every invocation writes exactly one JSON report, to `--out` or to
//! standard output, and a one-line human summary to standard error. The
//! process exit status is the [`ExitStatus`] of the run:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, `PASS`, or the checked condition holds |
//! | 1 | malformed input (bad flags, config, files, or violated preconditions) |
//! | 2 | inadmissible phase angle (`coeffs`) |
//! | 3 | continuation stuck or tolerance not met (`solve`) |
//! | 4 | `FAIL`, or the checked condition is violated |
//! | 5 | `BOUNDARY` (equality in the top-dimensional inequality) |
//!
//! Each flag can also be set through an environment variable with the
//! `GMA_` prefix (`GMA_CONFIG`, `GMA_OUT`, `GMA_THREADS`, `GMA_TOL`,
//! `GMA_SEED`); explicit flags take precedence.

mod commands;
pub mod config;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};
use thiserror::Error;

pub use commands::{check_cone, coeffs, solve, toric, verify};
pub use config::{
    BackgroundConfig, CoeffsConfig, ConeConfig, SolveConfig, ToricConfig,
};

use crate::dhym::DhymError;
use crate::equation::{Convention, EquationError};
use crate::toric::ToricError;
use crate::torus::SolverError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[repr(i32)]
pub enum ExitStatus {
    Success = 0,
    Malformed = 1,
    InadmissiblePhase = 2,
    ContinuationStuck = 3,
    Fail = 4,
    Boundary = 5,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Config(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    Dhym(#[from] DhymError),
    #[error(transparent)]
    Toric(#[from] ToricError),
}

/// A finished run: the JSON report and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: ExitStatus,
    pub report: Value,
    /// One-line human summary.
    pub summary: String,
}

impl Outcome {
    pub(crate) fn new<T: serde::Serialize>(
        command: &str,
        status: ExitStatus,
        body: &T,
        summary: String,
    ) -> Self {
        let mut map = match serde_json::to_value(body) {
            Ok(Value::Object(m)) => m,
            Ok(other) => {
                let mut m = Map::new();
                m.insert("result".into(), other);
                m
            }
            Err(e) => {
                let mut m = Map::new();
                m.insert("error".into(), Value::String(e.to_string()));
                m
            }
        };
        map.insert("command".into(), Value::String(command.into()));
        map.insert("exit_code".into(), Value::from(status.code()));
        Self {
            status,
            report: Value::Object(map),
            summary,
        }
    }

    pub fn error(command: &str, err: &CliError) -> Self {
        let mut map = Map::new();
        map.insert("error".into(), Value::String(err.to_string()));
        Self::new(command, ExitStatus::Malformed, &map, format!("{command}: error: {err}"))
    }

    /// Pretty-printed report with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("JSON value serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Parser)]
#[command(name = "gma", version, about = "Generalized Monge-Ampère and dHYM numerics")]
pub struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true, env = "GMA_CONFIG")]
    pub config: Option<PathBuf>,
    /// Report path; defaults to standard output.
    #[arg(long, global = true, env = "GMA_OUT")]
    pub out: Option<PathBuf>,
    /// Worker threads for grid-parallel loops.
    #[arg(long, global = true, env = "GMA_THREADS")]
    pub threads: Option<usize>,
    /// Tolerance override.
    #[arg(long, global = true, env = "GMA_TOL")]
    pub tol: Option<f64>,
    /// Recorded in the report to reproduce randomized harness runs.
    #[arg(long, global = true, env = "GMA_SEED")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// dHYM coefficients, their canonical form and admissibility.
    Coeffs {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        theta_hat: Option<f64>,
        #[arg(long, value_parser = parse_convention)]
        convention: Option<Convention>,
    },
    /// Residual and cone margins for one spectrum.
    CheckCone,
    /// Continuity-method solve on a flat torus.
    Solve,
    /// Re-verifies a stored potential.
    Verify,
    /// Intersection-number stability checks on a toric manifold.
    Toric,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Coeffs { .. } => "coeffs",
            Command::CheckCone => "check-cone",
            Command::Solve => "solve",
            Command::Verify => "verify",
            Command::Toric => "toric",
        }
    }
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    match s.to_ascii_uppercase().as_str() {
        "SPECLAGMA" => Ok(Convention::Speclagma),
        "GENEQ" => Ok(Convention::Geneq),
        "DIRECT" => Ok(Convention::Direct),
        _ => Err(format!("unknown convention `{s}` (SPECLAGMA, GENEQ, DIRECT)")),
    }
}

fn read_config<T: serde::de::DeserializeOwned>(path: Option<&Path>) -> Result<T, CliError> {
    let path = path.ok_or_else(|| CliError::Invalid("--config is required".into()))?;
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

fn coeffs_config(cli: &Cli) -> Result<CoeffsConfig, CliError> {
    let Command::Coeffs {
        n,
        theta_hat,
        convention,
    } = &cli.command
    else {
        unreachable!("coeffs_config called for another command")
    };
    let mut cfg = match &cli.config {
        Some(p) => read_config::<CoeffsConfig>(Some(p))?,
        None => CoeffsConfig {
            n: n.ok_or_else(|| CliError::Invalid("--n or --config is required".into()))?,
            theta_hat: theta_hat
                .ok_or_else(|| CliError::Invalid("--theta-hat or --config is required".into()))?,
            convention: Convention::Speclagma,
        },
    };
    if let Some(n) = n {
        cfg.n = *n;
    }
    if let Some(t) = theta_hat {
        cfg.theta_hat = *t;
    }
    if let Some(c) = convention {
        cfg.convention = *c;
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg_path = cli.config.as_deref();
    match &cli.command {
        Command::Coeffs { .. } => Ok(coeffs(&coeffs_config(cli)?)),
        Command::CheckCone => check_cone(&read_config(cfg_path)?),
        Command::Solve => {
            let mut cfg: SolveConfig = read_config(cfg_path)?;
            if cli.tol.is_some() {
                cfg.tol = cli.tol;
            }
            solve(&cfg, cli.out.as_deref())
        }
        Command::Verify => {
            let mut cfg: SolveConfig = read_config(cfg_path)?;
            if cli.tol.is_some() {
                cfg.tol = cli.tol;
            }
            let base = cfg_path.and_then(Path::parent).unwrap_or(Path::new("."));
            verify(&cfg, base)
        }
        Command::Toric => toric(&read_config(cfg_path)?),
    }
}

/// Runs one parsed invocation without touching standard streams.
pub fn execute(cli: &Cli) -> Outcome {
    let name = cli.command.name();
    let run = || dispatch(cli).unwrap_or_else(|e| Outcome::error(name, &e));
    let mut outcome = match cli.threads {
        Some(0) => Outcome::error(name, &CliError::Invalid("--threads must be positive".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Outcome::error(name, &CliError::Invalid(e.to_string())),
        },
        None => run(),
    };
    if let (Some(seed), Value::Object(map)) = (cli.seed, &mut outcome.report) {
        map.insert("seed".into(), Value::from(seed));
    }
    outcome
}

/// Parses `args`, runs, writes the report, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) {
                print!("{e}");
                return 0;
            }
            let outcome = Outcome::error("gma", &CliError::Invalid(e.to_string()));
            print!("{}", outcome.to_json());
            eprint!("{e}");
            return outcome.status.code();
        }
    };
    let outcome = execute(&cli);
    eprintln!("{}", outcome.summary);
    let text = outcome.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                print!("{text}");
                return ExitStatus::Malformed.code();
            }
        }
        None => print!("{text}"),
    }
    outcome.status.code()
}

/// Runs the `toric` command on a JSON configuration string.
pub fn run_toric_json(config: &str) -> Outcome {
    match serde_json::from_str::<ToricConfig>(config) {
        Ok(cfg) => toric(&cfg).unwrap_or_else(|e| Outcome::error("toric", &e)),
        Err(e) => Outcome::error("toric", &CliError::Config(e)),
    }
}

/// Runs the `coeffs` command on a JSON configuration string.
pub fn run_coeffs_json(config: &str) -> Outcome {
    match serde_json::from_str::<CoeffsConfig>(config) {
        Ok(cfg) => coeffs(&cfg),
        Err(e) => Outcome::error("coeffs", &CliError::Config(e)),
    }
}

/// Runs the `check-cone` command on a JSON configuration string.
pub fn run_check_cone_json(config: &str) -> Outcome {
    match serde_json::from_str::<ConeConfig>(config) {
        Ok(cfg) => check_cone(&cfg).unwrap_or_else(|e| Outcome::error("check-cone", &e)),
        Err(e) => Outcome::error("check-cone", &CliError::Config(e)),
    }
}

/// Runs the `solve` command on a JSON configuration string; the potential
/// is written next to `out` when it is given.
pub fn run_solve_json(config: &str, out: Option<&Path>) -> Outcome {
    match serde_json::from_str::<SolveConfig>(config) {
        Ok(cfg) => solve(&cfg, out).unwrap_or_else(|e| Outcome::error("solve", &e)),
        Err(e) => Outcome::error("solve", &CliError::Config(e)),
    }
}
