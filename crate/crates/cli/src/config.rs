//! Run configuration: built-in defaults, then an optional key-value file, then
//! environment overrides, then command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

pub const ENV_THREADS: &str = "ETHETA_THREADS";
pub const ENV_OUTPUT_DIR: &str = "ETHETA_OUTPUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub e_matrix_path: Option<PathBuf>,
    /// (γ_I, γ_E) as exact strings, e.g. "1/2"
    pub gamma_weights: Option<(String, String)>,
    /// largest n(x) the shell sums may reach
    pub shell_bound: u64,
    pub qseries_length: usize,
    pub format: Option<Format>,
    pub threads: usize,
    pub output_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            e_matrix_path: None,
            gamma_weights: None,
            shell_bound: 10,
            qseries_length: 50,
            format: None,
            threads: 1,
            output_dir: None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    e_matrix_path: Option<PathBuf>,
    gamma_weights: Option<String>,
    shell_bound: Option<u64>,
    qseries_length: Option<usize>,
    format: Option<Format>,
    threads: Option<usize>,
    output_dir: Option<PathBuf>,
}

fn parse_gammas(s: &str) -> Result<(String, String), CliError> {
    match s.split_once(',') {
        Some((a, b)) => Ok((a.trim().to_string(), b.trim().to_string())),
        None => Err(CliError::Input(format!("gamma_weights must be \"γ_I,γ_E\", got {s:?}"))),
    }
}

impl Config {
    /// Defaults, overlaid with `path` if given, then the environment.
    pub fn load(path: Option<&Path>) -> Result<Config, CliError> {
        let mut c = Config::default();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", p.display())))?;
            c.apply_text(&text)?;
        }
        c.apply_env(|k| std::env::var(k).ok())?;
        c.validate()?;
        Ok(c)
    }

    /// Overlays `key = value` lines (TOML syntax).
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        let f: ConfigFile =
            toml::from_str(text).map_err(|e| CliError::Input(format!("bad config file: {e}")))?;
        if let Some(v) = f.e_matrix_path {
            self.e_matrix_path = Some(v);
        }
        if let Some(v) = f.gamma_weights {
            self.gamma_weights = Some(parse_gammas(&v)?);
        }
        if let Some(v) = f.shell_bound {
            self.shell_bound = v;
        }
        if let Some(v) = f.qseries_length {
            self.qseries_length = v;
        }
        if let Some(v) = f.format {
            self.format = Some(v);
        }
        if let Some(v) = f.threads {
            self.threads = v;
        }
        if let Some(v) = f.output_dir {
            self.output_dir = Some(v);
        }
        Ok(())
    }

    pub fn apply_env(&mut self, get: impl Fn(&str) -> Option<String>) -> Result<(), CliError> {
        if let Some(t) = get(ENV_THREADS) {
            self.threads = t
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("{ENV_THREADS} must be a positive integer, got {t:?}")))?;
        }
        if let Some(d) = get(ENV_OUTPUT_DIR) {
            if !d.is_empty() {
                self.output_dir = Some(PathBuf::from(d));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.threads == 0 {
            return Err(CliError::Input("thread count must be at least 1".into()));
        }
        if self.qseries_length == 0 {
            return Err(CliError::Input("qseries_length must be at least 1".into()));
        }
        Ok(())
    }

    /// Largest discriminant whose (v, x) sum stays within the shell bound.
    pub fn max_discriminant(&self) -> i64 {
        4 * self.shell_bound as i64 + 3
    }
}
