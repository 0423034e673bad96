//! Front end for `henkin-verify`: argument parsing, default resolution and report output.

mod commands;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use henkin_core::Report;

pub use commands::run_command;

/// Environment variable naming the directory that receives reports.
pub const OUTPUT_DIR_ENV: &str = "HENKIN_OUTPUT_DIR";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug, Clone)]
#[command(name = "henkin-verify", version, about = "Verify Henkin counterexample measures on the spheres S_4 and S_2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Ambient dimension, 2 or 4
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Maximal total degree of checked monomials
    #[arg(long, global = true)]
    pub maxdeg: Option<u32>,
    /// Truncation or section size
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Level of the Cantor atomic approximation
    #[arg(long, global = true)]
    pub level: Option<u32>,
    /// Accuracy of recursive Fourier coefficients
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Comparison tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo or peak samples
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Number of random cases
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Largest frequency or coefficient index
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
    /// Single multi-index, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub alpha: Option<Vec<u32>>,
    /// Output file; relative paths resolve against $HENKIN_OUTPUT_DIR when set
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Monomial norms against the kernel expansion
    VerifyNorms,
    /// Exact disc-to-ball isometry on random coefficient lists
    VerifyIsometry,
    /// Disc kernel coefficients and their asymptotics
    KernelTable,
    /// Cantor Fourier coefficients by recursion and by atoms
    CantorFourier,
    /// Riesz 1/2-energy and weighted Fourier sums of the Cantor measure
    CantorEnergy,
    /// Closed-form moments against Monte Carlo
    Moments,
    /// The identity between moments and inner products with the witness
    HenkinCheck,
    /// Build the witness and check its norm
    Witness,
    /// Peak function and non-Henkin sequence (d = 4)
    PeakCheck,
    /// Finite-section lower bounds for the multiplier norm of r
    Compression,
    /// Every suite with default parameters
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyNorms => "verify-norms",
            Command::VerifyIsometry => "verify-isometry",
            Command::KernelTable => "kernel-table",
            Command::CantorFourier => "cantor-fourier",
            Command::CantorEnergy => "cantor-energy",
            Command::Moments => "moments",
            Command::HenkinCheck => "henkin-check",
            Command::Witness => "witness",
            Command::PeakCheck => "peak-check",
            Command::Compression => "compression",
            Command::All => "all",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Rejected configuration; maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<henkin_core::Error> for ConfigError {
    fn from(e: henkin_core::Error) -> Self {
        ConfigError(e.to_string())
    }
}

/// A finished run: the report and, for tabular commands, a CSV rendering.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.pass {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

fn output_path(cli: &Cli, format: Format, env_dir: Option<&Path>) -> Option<PathBuf> {
    match (&cli.output, env_dir) {
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => Some(dir.join(format!("{}.{}", cli.command.name(), format.extension()))),
        (None, None) => None,
    }
}

/// Runs the parsed command, writes its output, and returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let outcome = match run_command(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("henkin-verify: {e}");
            return EXIT_INVALID;
        }
    };
    let format = cli.format.unwrap_or(Format::Json);
    let body = match format {
        Format::Json => outcome.report.to_json(),
        Format::Csv => match &outcome.csv {
            Some(csv) => csv.clone(),
            None => {
                eprintln!("henkin-verify: {} has no tabular output; use --format json", cli.command.name());
                return EXIT_INVALID;
            }
        },
    };
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    let written = match output_path(cli, format, env_dir.as_deref()) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                if let Err(e) = std::fs::create_dir_all(parent) {
                    eprintln!("henkin-verify: cannot create {}: {e}", parent.display());
                    return EXIT_INVALID;
                }
            }
            std::fs::write(&path, body.as_bytes()).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("henkin-verify: {e}");
        return EXIT_INVALID;
    }
    for failed in outcome.report.failed() {
        eprintln!("FAIL {}", failed.name);
    }
    outcome.exit_code()
}
