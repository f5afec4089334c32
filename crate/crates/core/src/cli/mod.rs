//! `confreg` command line: `reproduce`, `eval` and `sweep`.
//!
//! Exit codes: 0 success, 1 verification failure (or I/O failure), 2 regime
//! not satisfied, 64 usage error. Reports are written even when
//! verification fails.

mod args;
mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

pub use args::{Cli, Command, CommonArgs, SweepArgs};
pub use commands::{run_eval, run_reproduce, run_sweep, EvalReport, PairwiseDominance, ReproduceReport, SweepReport};
pub use config::{
    resolve, Band, CommandKind, ConfigFile, EstimatorSpec, ExperimentConfig, ModelSpec, ModelTag,
    OutputFormat, RunSettings, SweepAxis, SweepSpec, SweepValue, SEED_ENV,
};
pub use output::{render_eval, render_reproduce, render_sweep};

use crate::evaluation::ReportStatus;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_REGIME: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("outside the counterexample regime: {0}")]
    Regime(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Regime(_) => EXIT_REGIME,
            CliError::Io(_) => EXIT_VERIFICATION,
        }
    }
}

/// A rendered report and the exit code it implies.
#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub body: String,
    pub path: PathBuf,
}

/// `{command}-seed{seed}-{digest}.{ext}`
pub fn report_file_name(command: CommandKind, config: &ExperimentConfig) -> String {
    format!(
        "{}-seed{}-{}.{}",
        command.as_str(),
        config.seed,
        config.digest(),
        config.format.extension()
    )
}

fn with_workers<T: Send>(
    workers: Option<usize>,
    job: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    match workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {w} workers: {e}")))?;
            Ok(pool.install(job))
        }
        None => Ok(job()),
    }
}

fn write_report(dir: &Path, name: &str, body: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, body)?;
    Ok(path)
}

/// Runs one parsed command, writing the report under the output directory.
pub fn execute(cli: &Cli, env_seed: Option<String>) -> Result<Outcome, CliError> {
    let (kind, common, sweep) = match &cli.command {
        Command::Reproduce(a) => (CommandKind::Reproduce, a, None),
        Command::Eval(a) => (CommandKind::Eval, a, None),
        Command::Sweep(s) => (
            CommandKind::Sweep,
            &s.common,
            Some((s.axis, s.values.as_ref())),
        ),
    };
    let settings = resolve(kind, common, sweep, env_seed)?;
    let config = &settings.config;
    let format = config.format;

    let (body, exit_code) = with_workers(settings.workers, || -> Result<_, CliError> {
        Ok(match kind {
            CommandKind::Eval => (render_eval(&run_eval(config)?, format), EXIT_OK),
            CommandKind::Sweep => (render_sweep(&run_sweep(config)?, format), EXIT_OK),
            CommandKind::Reproduce => {
                let report = run_reproduce(config)?;
                let code = match report.result.status {
                    ReportStatus::Verified => EXIT_OK,
                    ReportStatus::VerificationFailed => EXIT_VERIFICATION,
                    ReportStatus::OutsideRegime => EXIT_REGIME,
                };
                (render_reproduce(&report, format), code)
            }
        })
    })??;

    let path = write_report(&settings.out_dir, &report_file_name(kind, config), &body)?;
    Ok(Outcome {
        exit_code,
        body,
        path,
    })
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli, std::env::var(SEED_ENV).ok()) {
        Ok(outcome) => {
            print!("{}", outcome.body);
            eprintln!("report: {}", outcome.path.display());
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
