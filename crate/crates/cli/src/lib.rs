//! `bca`: boundary-condition analysis from the command line.
//!
//! Reports go to stdout (JSON by default), diagnostics to stderr.
//! Exit codes: 0 ran (the verdict is in the report), 2 invalid input,
//! 3 numerical failure.

pub mod commands;
pub mod input;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use bca_core::{BcError, TolerancePolicy};
use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment override for `--tol`; the flag wins when both are given.
pub const TOL_ENV: &str = "BCA_TOL";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<BcError> for CliError {
    fn from(e: BcError) -> Self {
        match e {
            BcError::SingularSystem
            | BcError::RankDeficiency { .. }
            | BcError::NotNormalized(_)
            | BcError::OrderingDegeneracy
            | BcError::NonHermitianInput { .. }
            | BcError::NotDissipative
            | BcError::OddOrder(_)
            | BcError::EvenOrder(_)
            | BcError::OddOrderUnsupported(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    /// y^(2n-2)(0) = y^(2n-2)(1) = ... = y^(n)(0) = y^(n)(1) = y^(n-1)(1) = 0, order 2n-1.
    OddIrregular,
}

#[derive(Debug, Parser)]
#[command(
    name = "bca",
    version,
    about = "Dissipativity, self-adjointness and regularity of boundary conditions for (-i)^m y^(m)"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Sets all three tolerances (definiteness, rank, zero); overrides BCA_TOL.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for the exact oracle's sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Oracle sample count.
    #[arg(long, global = true, default_value_t = 20)]
    pub samples: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize a condition file; the output is itself a condition file.
    Normalize {
        file: PathBuf,
        /// Reduce leading pairs to (1,0)/(0,1) and clear leading derivatives from other rows.
        #[arg(long)]
        canonical: bool,
    },
    /// Full report: verdicts, orders, thetas, contraction, oracle summary.
    Check {
        file: PathBuf,
    },
    Dissipative {
        file: PathBuf,
    },
    Regular {
        file: PathBuf,
    },
    Selfadjoint {
        file: PathBuf,
    },
    /// Contraction V of a dissipative system; the output is a contraction file.
    ToContraction {
        file: PathBuf,
    },
    /// Condition file for the contraction in a {m, V} file.
    FromContraction {
        file: PathBuf,
    },
    /// Exact identity suites of the oracle.
    Verify {
        #[arg(long)]
        m: usize,
    },
    /// Emit a condition file from a named family.
    Example {
        #[arg(long, value_enum)]
        name: ExampleName,
        #[arg(long)]
        n: usize,
    },
}

pub fn resolve_tolerances(flag: Option<f64>, env: Option<&str>) -> Result<TolerancePolicy, CliError> {
    let value = match (flag, env) {
        (Some(x), _) => Some(x),
        (None, Some(s)) => Some(
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("{TOL_ENV}: cannot parse {s:?} as a number")))?,
        ),
        (None, None) => None,
    };
    match value {
        Some(x) => Ok(TolerancePolicy::uniform(x)?),
        None => Ok(TolerancePolicy::default()),
    }
}

/// Runs the tool with `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let env = std::env::var(TOL_ENV).ok();
    let result = resolve_tolerances(cli.tol, env.as_deref()).and_then(|tol| commands::execute(&cli, &tol));
    match result {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
                Format::Text => output::render_text(&report),
            };
            match stdout.write_all(text.as_bytes()) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(stderr, "bca: cannot write report: {e}");
                    EXIT_NUMERICAL
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "bca: {e}");
            e.exit_code()
        }
    }
}
