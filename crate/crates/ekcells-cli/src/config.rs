//! Run configuration: command-line flags merged over an optional JSON config file.
//!
//! Every flag has a config key of the same name with dashes replaced by underscores.
//! Flags take precedence over the file. Nothing is read from the environment.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "ekcells", version, about = "Exact homology computations for cellular E_k-algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandName {
    FreeBasis,
    Quotient,
    Tor,
    E1Homology,
    Splitting,
    Partition,
    Koszul,
    Stability,
    Glnfq,
    Connectivity,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hilbert table and generators of a free W_{k-1}-algebra.
    FreeBasis(Options),
    /// Hilbert table of a free algebra modulo bare generators, with its minimal slope.
    Quotient(Options),
    /// Tor of an augmented algebra, from its bar complex.
    Tor(Options),
    /// E_1-homology of an augmented algebra, from its bar complex.
    E1Homology(Options),
    /// Standard connectivity estimate for a monoidal groupoid.
    Splitting(Options),
    /// Homology of the partition complex.
    Partition(Options),
    /// Koszulness of the fundamental quadratic datum over a groupoid.
    Koszul(Options),
    /// Quotient slopes and the two-thirds check.
    Stability(Options),
    /// General linear groups over finite fields: Quillen tables and char-p slopes.
    Glnfq(Options),
    /// Abstract connectivities: convolution and vanishing-line transfer.
    Connectivity(Options),
}

impl Command {
    pub fn split(self) -> (CommandName, Options) {
        match self {
            Command::FreeBasis(o) => (CommandName::FreeBasis, o),
            Command::Quotient(o) => (CommandName::Quotient, o),
            Command::Tor(o) => (CommandName::Tor, o),
            Command::E1Homology(o) => (CommandName::E1Homology, o),
            Command::Splitting(o) => (CommandName::Splitting, o),
            Command::Partition(o) => (CommandName::Partition, o),
            Command::Koszul(o) => (CommandName::Koszul, o),
            Command::Stability(o) => (CommandName::Stability, o),
            Command::Glnfq(o) => (CommandName::Glnfq, o),
            Command::Connectivity(o) => (CommandName::Connectivity, o),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by all subcommands; each subcommand reads the ones it needs.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// JSON config file; its keys are the flag names with underscores.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Field characteristic: 0 for the rationals, else a prime.
    #[arg(long)]
    pub ell: Option<u64>,
    /// Operadic level: a positive integer or `inf`.
    #[arg(long)]
    #[serde(default, deserialize_with = "text")]
    pub k: Option<String>,
    /// Window `nmax,dmax`.
    #[arg(long)]
    #[serde(default, deserialize_with = "text")]
    pub window: Option<String>,
    /// Generators `name:n,d; name:n,d; ...`.
    #[arg(long)]
    pub gens: Option<String>,
    /// Comma-separated bare generators to quotient by.
    #[arg(long)]
    pub kill: Option<String>,
    /// Input file (algebra, groupoid or extra cells, depending on the subcommand).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized sweeps.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Groupoid family: `trivial-n`, `symmetric` or `gl` (with `--q`).
    #[arg(long)]
    pub family: Option<String>,
    /// Prime power q of F_q.
    #[arg(long)]
    pub q: Option<u64>,
    /// Largest rank.
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Subcommand mode; see the README for each subcommand's modes.
    #[arg(long)]
    pub mode: Option<String>,
    /// Prime for the char-p slope.
    #[arg(long)]
    pub prime: Option<u64>,
    /// Connectivity: JSON, `unit`, `const:V`, `affine:A,B` or `linear:NUM,DEN,OFF`.
    #[arg(long)]
    pub rho: Option<String>,
    /// Second connectivity for `--mode convolve`.
    #[arg(long)]
    pub rho2: Option<String>,
    /// Lower operadic level for transfers.
    #[arg(long)]
    pub l: Option<u32>,
    /// Algebra built from `--gens`: `free-wk`, `free-gca`, `trivial` or `unit`.
    #[arg(long)]
    pub algebra: Option<String>,
    /// Number of random generator sets in a sweep.
    #[arg(long)]
    pub sets: Option<u32>,
    /// Omit the unit from tables.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub reduced: Option<bool>,
}

fn text<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum T {
        S(String),
        I(i64),
        L(Vec<i64>),
    }
    Ok(Option::<T>::deserialize(d)?.map(|t| match t {
        T::S(s) => s,
        T::I(i) => i.to_string(),
        T::L(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
    }))
}

macro_rules! merge_fields {
    ($flags:ident, $file:ident; $($f:ident),*) => {
        Options { config: $flags.config, $($f: $flags.$f.or($file.$f)),* }
    };
}

impl Options {
    /// Reads the config file named by `--config`, if any, and lays the flags over it.
    pub fn resolve(self) -> Result<Options, CliError> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let file = Options::from_file(&path)?;
        Ok(self.merge_over(file))
    }

    pub fn from_file(path: &Path) -> Result<Options, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(path.display().to_string(), e.to_string()))
    }

    /// Flags in `self` win over values in `file`.
    pub fn merge_over(self, file: Options) -> Options {
        let flags = self;
        merge_fields!(flags, file;
            ell, k, window, gens, kill, input, output, format, seed, threads, family, q, nmax,
            mode, prime, rho, rho2, l, algebra, sets, reduced)
    }
}
