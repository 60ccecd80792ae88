//! Batch front end for `ekcells`: validates a run configuration, dispatches one
//! subcommand and writes its CSV or JSON output.
//!
//! Exit codes: `0` on success, `1` when a check command's verdict is false, `2` on
//! input errors. Output is byte-identical across runs and thread counts.

pub mod config;
mod jobs;
pub mod sweep;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{Cli, Command, CommandName, Format, Options};
pub use jobs::{execute, validate, Job, Outcome};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{field}`: {reason}")]
    Field { field: &'static str, reason: String },
    #[error("missing `{0}`")]
    Missing(&'static str),
    #[error("cannot read config {0}: {1}")]
    Config(String, String),
    #[error("i/o error on {0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("computation rejected the input: {0}")]
    Compute(String),
    #[error("cannot build a thread pool: {0}")]
    Threads(String),
}

impl CliError {
    pub(crate) fn field(field: &'static str, reason: impl ToString) -> Self {
        CliError::Field { field, reason: reason.to_string() }
    }

    pub(crate) fn compute(e: impl ToString) -> Self {
        CliError::Compute(e.to_string())
    }
}

/// A fully validated run: nothing is computed until [`RunConfig::run`].
#[derive(Debug)]
pub struct RunConfig {
    pub command: CommandName,
    pub job: Job,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
}

impl RunConfig {
    /// Merges the config file, then checks every parameter the subcommand reads.
    pub fn from_options(command: CommandName, opts: Options) -> Result<RunConfig, CliError> {
        let opts = opts.resolve()?;
        if opts.threads == Some(0) {
            return Err(CliError::field("threads", "must be positive"));
        }
        let job = validate(command, &opts)?;
        let format = opts.format.unwrap_or_else(|| job.default_format());
        Ok(RunConfig { command, job, output: opts.output, format, threads: opts.threads })
    }

    /// Runs the job, on a dedicated pool when `threads` is set.
    pub fn execute(&self) -> Result<Outcome, CliError> {
        match self.threads {
            None => execute(&self.job, self.format),
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Threads(e.to_string()))?
                .install(|| execute(&self.job, self.format)),
        }
    }

    /// Executes and writes the output; returns the process exit code.
    pub fn run(&self) -> Result<i32, CliError> {
        let out = self.execute()?;
        match &self.output {
            Some(p) => std::fs::write(p, &out.text).map_err(|e| CliError::Io(p.display().to_string(), e))?,
            None => print!("{}", out.text),
        }
        eprintln!("{}", out.summary);
        Ok(if out.verdict { 0 } else { 1 })
    }
}

/// Parses, validates and runs; every error maps to exit code 2.
pub fn main_with(cli: Cli) -> i32 {
    let (name, opts) = cli.command.split();
    match RunConfig::from_options(name, opts).and_then(|c| c.run()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
