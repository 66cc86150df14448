//! The `vhiggs` command line: one JSON report on standard output, a short
//! rendering on standard error, exit code 0 (pass), 1 (failure) or 2 (input).

pub mod document;
pub mod report;

mod commands;
mod selftest;

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

pub use document::{BuildDocument, InputError, InstanceDocument};
pub use report::Report;

use crate::spectral::Sign;

#[derive(Debug, Parser)]
#[command(name = "vhiggs", version, about = "Exact checks and correspondences for V-twisted Higgs fields on P^1")]
pub struct Cli {
    /// Sign in the eigenvalue condition at marked points.
    #[arg(long, global = true, default_value = "+1", allow_hyphen_values = true)]
    pub sign: Sign,
    /// Leave `timing_ms` out of the report.
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// Seed for sampling and random generation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an instance document and run every check on it.
    Check {
        /// Instance document, or `-` for standard input.
        file: PathBuf,
        /// Random base points for the eigenspace-invariance check.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Certify that the pair defines a unique field.
    Reconstruct { file: PathBuf },
    /// Spectral curve, integrality, fibers over the marked points and the multiplier.
    Spectral { file: PathBuf },
    /// Build an instance from spectral data and Hecke data.
    Build {
        file: PathBuf,
        /// Also write the produced instance document here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Hecke data whose modified bundle splits as O(c) + O(d).
    HeckeMake {
        #[arg(long, allow_negative_numbers = true)]
        c: i64,
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        l: usize,
        /// Comma separated candidate points, e.g. `0,1,-1/2`.
        #[arg(long, allow_hyphen_values = true)]
        pool: String,
    },
    /// Check the field and spectral invariants on random instances.
    Selftest {
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let (name, result) = match &cli.command {
        Command::Check { file, samples } => {
            ("check", read_input(file).and_then(|s| commands::check(&s, cli.sign, cli.seed.unwrap_or(0), *samples)))
        }
        Command::Reconstruct { file } => ("reconstruct", read_input(file).and_then(|s| commands::reconstruct_cmd(&s, cli.sign))),
        Command::Spectral { file } => ("spectral", read_input(file).and_then(|s| commands::spectral(&s, cli.sign))),
        Command::Build { file, output } => {
            ("build", read_input(file).and_then(|s| commands::build(&s, cli.sign, output.as_deref())))
        }
        Command::HeckeMake { c, d, l, pool } => {
            ("hecke-make", commands::hecke_make(*c, *d, *l, pool, cli.sign, cli.seed.unwrap_or(0)))
        }
        Command::Selftest { count } => ("selftest", Ok(selftest::selftest(cli.seed.unwrap_or(0), *count, cli.sign))),
    };
    let (mut report, code) = match result {
        Ok(r) => {
            let code = if r.passed { 0 } else { 1 };
            (r, code)
        }
        Err(e) => {
            let mut r = Report::new(name, cli.sign);
            r.passed = false;
            r.error = Some(json!({"kind": "input", "message": e.to_string()}));
            (r, 2)
        }
    };
    if !cli.no_timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    let mut stdout = serde_json::to_string_pretty(&report).expect("plain data");
    stdout.push('\n');
    Outcome { code, stdout, stderr: report.render() }
}

fn read_input(path: &std::path::Path) -> Result<String, InputError> {
    let io = |e: std::io::Error| InputError::Io { path: path.display().to_string(), message: e.to_string() };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}
