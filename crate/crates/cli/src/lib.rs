//! Command-line front end: carrier files in, tables and JSON reports out.
//!
//! Exit codes: 0 success, 1 usage, 2 validation, 3 verification failure.

pub mod carrier_file;
mod commands;
pub mod json;
pub mod parse;
pub mod values;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use carrier_file::{parse_carrier, render, CarrierFile, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Validation(_) => EXIT_VALIDATION,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fneq", version, about = "Solution families of twisted functional equations on monoids and Z^d")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List characters, involutive automorphisms and admissible weights.
    Enumerate(Common),
    /// Construct and verify every applicable family.
    Families {
        #[command(flatten)]
        common: Common,
        /// Restrict to one equation (SINE_ADDITION, MU_SINE_SUBTRACTION, WILSON, MAIN, APPLICATION).
        #[arg(long)]
        equation: Option<String>,
        /// Lattice character bases, e.g. `2,0.5`; repeatable.
        #[arg(long)]
        chi: Vec<String>,
    },
    /// Check a triple read from a values file.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "MAIN")]
        equation: String,
        /// Lines of `<slot> <element> <re> <im>`.
        #[arg(long)]
        values: PathBuf,
    },
    /// Dimension and basis of the homogeneous solution space.
    Nullspace(Common),
    /// Multi-start numerical search for nondegenerate MAIN solutions.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        starts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Carrier file.
    carrier: PathBuf,
    /// Involution: index into the enumerated list, `id`, `neg`, or an integer matrix `a,b;c,d` on lattices.
    #[arg(long)]
    sigma: Option<String>,
    /// Weight: index into the admissible list for σ, or comma-separated bases on lattices.
    #[arg(long)]
    mu: Option<String>,
    /// Half-width of the sample box on lattices.
    #[arg(long = "box", default_value_t = fneq::carrier::DEFAULT_BOX)]
    bound: i64,
    /// Write a JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Compute in double precision on finite carriers instead of exactly.
    #[arg(long)]
    float: bool,
    /// Include wall time in the JSON report.
    #[arg(long)]
    record_time: bool,
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let help = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            if help {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    let echo = echo(&args);
    match commands::execute(cli.command, echo, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFICATION,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

/// Command line without the program name and the `--json` target.
fn echo(args: &[std::ffi::OsString]) -> Vec<String> {
    let mut words = Vec::new();
    let mut iter = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned());
    while let Some(a) = iter.next() {
        if a == "--json" {
            iter.next();
        } else if !a.starts_with("--json=") {
            words.push(a);
        }
    }
    words
}
