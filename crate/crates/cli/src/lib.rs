//! Library side of the `etheta` command: argument types, configuration and the
//! subcommand implementations, kept separate from `main` so tests can drive them.

pub mod commands;
pub mod config;
pub mod selftest;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use config::{Config, Format};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or out-of-domain input; exit code 2.
    #[error("{0}")]
    Input(String),
    /// The computation itself failed; exit code 1.
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl From<etheta_core::Error> for CliError {
    fn from(e: etheta_core::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Compute(e.to_string())
        }
    }
}

impl From<etheta_analytic::Error> for CliError {
    fn from(e: etheta_analytic::Error) -> Self {
        match e {
            etheta_analytic::Error::InvalidArgument(_) => CliError::Input(e.to_string()),
            etheta_analytic::Error::Divergence(_) => CliError::Compute(e.to_string()),
        }
    }
}

/// What a subcommand produced: its text and whether every check in it held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub ok: bool,
    /// file extension used when writing into an output directory
    pub ext: &'static str,
}

#[derive(Debug, Parser)]
#[command(name = "etheta", version, about = "Exact Fourier coefficients of exceptional theta lifts")]
pub struct Cli {
    /// Key-value configuration file (TOML syntax)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (overrides ETHETA_THREADS and the config file)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write results to <dir>/<subcommand>.<ext> instead of stdout
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RingChoice {
    #[value(name = "product3")]
    Product3,
    #[value(name = "ZxZD")]
    ZxZD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteChoice {
    A,
    B,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fourier coefficient of the Siegel-type lift at T₀, as a polynomial in w, z
    SiegelFc {
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        k2: usize,
        /// File holding T₀ as 6 or 9 comma-separated entries
        #[arg(long)]
        t0: PathBuf,
        /// `null`, `hw`, or a JSON file with a G₂ tensor
        #[arg(long, default_value = "null")]
        beta: String,
    },
    /// Fourier coefficient of the G₂ quaternionic lift
    G2Fc {
        /// Tensor degree of β = (x∧y)^m
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Target binary cubic A,B,C,D
        #[arg(long, conflicts_with = "ring", allow_hyphen_values = true)]
        w0: Option<String>,
        #[arg(long, value_enum)]
        ring: Option<RingChoice>,
        /// Discriminant for --ring ZxZD
        #[arg(long = "D", allow_hyphen_values = true)]
        d: Option<i64>,
        #[arg(long, value_enum, default_value = "a")]
        route: RouteChoice,
        /// JSON file with the Jordan element E
        #[arg(long)]
        e_matrix: Option<PathBuf>,
        /// Weights γ_I,γ_E
        #[arg(long)]
        gamma: Option<String>,
    },
    /// Normalized Δ_{G₂} coefficients α(D) with the Shimura consistency report
    ShimuraTable {
        #[arg(long, default_value_t = 36)]
        dmax: i64,
        #[arg(long, value_enum, default_value = "a")]
        route: RouteChoice,
    },
    /// Decide whether a coefficient table comes from a Siegel-type lift
    DetectLift {
        /// λ = (k₁+2k₂+4, k₁+k₂+4, k₂+4)
        #[arg(long)]
        lambda: String,
        /// JSON list of {"t0": ..., "fc": {...}}
        #[arg(long)]
        table: PathBuf,
        /// Cap on the lowering-operator search
        #[arg(long)]
        bound: Option<usize>,
    },
    /// List a rank-one fiber
    EnumerateRank1 {
        #[arg(long, conflicts_with = "w0")]
        t0: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        w0: Option<String>,
    },
    /// Residual table for the Bessel-function identities
    ValidateIdentities,
    /// Run the invariant suite
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SiegelFc { .. } => "siegel-fc",
            Command::G2Fc { .. } => "g2-fc",
            Command::ShimuraTable { .. } => "shimura-table",
            Command::DetectLift { .. } => "detect-lift",
            Command::EnumerateRank1 { .. } => "enumerate-rank1",
            Command::ValidateIdentities => "validate-identities",
            Command::Selftest => "selftest",
        }
    }
}

/// Resolves the configuration for a parsed command line.
pub fn resolve_config(cli: &Cli) -> Result<Config, CliError> {
    let mut c = Config::load(cli.config.as_deref())?;
    if let Some(t) = cli.threads {
        c.threads = t;
    }
    if let Some(d) = &cli.output_dir {
        c.output_dir = Some(d.clone());
    }
    if let Some(f) = cli.format {
        c.format = Some(f);
    }
    c.validate()?;
    Ok(c)
}

/// Runs a parsed command line.
pub fn run(cli: &Cli, config: &Config) -> Result<Outcome, CliError> {
    commands::dispatch(&cli.command, config)
}
