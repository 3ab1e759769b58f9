//! Command-line front end: one experiment per invocation, configured by a
//! JSON file and/or flags, writing CSV and JSON artifacts atomically.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 I/O error.

mod config;
mod execute;
pub mod validate;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub use config::{
    parse_config, BiexpParams, DecodeParams, DensityParams, DensitySource, EllipseParams, EncodeParams, Experiment,
    KernelDumpParams, Overrides, RunConfig, ValidateParams,
};
pub use execute::{execute, Summary};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::InvalidParameter(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sphere-approx", version, about = "Localized spherical-kernel approximation experiments")]
pub struct Args {
    /// Experiment to run.
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// JSON parameter file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// Manifold dimension used by the kernel.
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Encoding file read by `decode`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

impl Args {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n,
            m: self.m,
            q: self.q,
            snr_db: self.snr_db,
            seed: self.seed,
            grid: self.grid,
            out_dir: self.out_dir.clone(),
            input: self.input.clone(),
        }
    }
}

/// Parse arguments, run, print the summary line; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = parse_config(args.experiment, args.config.as_deref(), &args.overrides()).and_then(|cfg| execute(&cfg));
    match result {
        Ok(summary) => {
            println!("{}", summary.line);
            summary.exit_code
        }
        Err(e) => {
            eprintln!("sphere-approx: {e}");
            e.exit_code()
        }
    }
}
