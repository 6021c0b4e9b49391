//! Experiment configuration, read from a TOML document.
//!
//! ```toml
//! env = "f1"            # f1 | f2
//! d_x = 3
//! sigma = [2.0]
//! c_lambda = [0.22]
//! n = [2000, 4000]      # phase-1 sample sizes (select)
//! T = [10000, 100000]   # horizons (regret)
//! trials = 20
//! seed = 1
//! xi = 0.5
//! scheme = "count_proportional"
//! ```

use std::path::{Path, PathBuf};

use bvlasso_core::envsim::EnvKind;
use bvlasso_core::selection::WeightScheme;
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Select,
    Regret,
    Diagnose,
    Chernoff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvName {
    F1,
    F2,
}

impl From<EnvName> for EnvKind {
    fn from(e: EnvName) -> Self {
        match e {
            EnvName::F1 => EnvKind::F1,
            EnvName::F2 => EnvKind::F2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    PropGlobal,
    SmallXi,
    CountProportional,
}

impl From<SchemeName> for WeightScheme {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::PropGlobal => WeightScheme::PropGlobal,
            SchemeName::SmallXi => WeightScheme::SmallXi,
            SchemeName::CountProportional => WeightScheme::CountProportional,
        }
    }
}

impl SchemeName {
    pub fn label(self) -> &'static str {
        match self {
            SchemeName::PropGlobal => "prop_global",
            SchemeName::SmallXi => "small_xi",
            SchemeName::CountProportional => "count_proportional",
        }
    }
}

/// How regret at several horizons is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegretMode {
    /// One run tuned for each listed horizon.
    #[default]
    Separate,
    /// One run tuned for the largest horizon, read at every listed horizon.
    Prefix,
}

/// Problem constants from which misidentification probabilities are
/// computed; required by the `prop_global` and `small_xi` schemes.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    pub mu_m: f64,
    pub mu_big_m: f64,
    pub l: f64,
    pub l_mu: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChernoffConfig {
    /// Misidentification probabilities for the closed-form optimizer.
    pub p: Option<Vec<f64>>,
    #[serde(default)]
    pub brute_force: bool,
    /// Worst-case allocation inputs.
    pub n: Option<u64>,
    pub m_bins: Option<usize>,
    pub h: Option<f64>,
    pub b0: Option<f64>,
    pub b1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnoseConfig {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_diag_k")]
    pub bins_per_axis: usize,
    #[serde(default)]
    pub bin: usize,
    /// Coordinates treated as relevant (covariate indices, zero-based).
    #[serde(default)]
    pub relevant: Vec<usize>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

impl Default for DiagnoseConfig {
    fn default() -> Self {
        Self {
            samples: default_samples(),
            bins_per_axis: default_diag_k(),
            bin: 0,
            relevant: Vec::new(),
            gamma: default_gamma(),
        }
    }
}

fn default_samples() -> usize {
    100_000
}
fn default_diag_k() -> usize {
    2
}
fn default_gamma() -> f64 {
    0.5
}
fn default_trials() -> usize {
    1
}
fn default_xi() -> f64 {
    bvlasso_core::selection::DEFAULT_XI
}
fn default_scheme() -> SchemeName {
    SchemeName::CountProportional
}
fn default_d_x() -> usize {
    3
}
fn default_env() -> EnvName {
    EnvName::F1
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Informational; the subcommand decides what runs. A mismatch is an error.
    pub command: Option<Command>,
    #[serde(default = "default_env")]
    pub env: EnvName,
    #[serde(default = "default_d_x")]
    pub d_x: usize,
    #[serde(default)]
    pub sigma: Vec<f64>,
    #[serde(default)]
    pub c_lambda: Vec<f64>,
    #[serde(default)]
    pub n: Vec<u64>,
    #[serde(default, rename = "T")]
    pub horizons: Vec<u64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_xi")]
    pub xi: f64,
    #[serde(default = "default_scheme")]
    pub scheme: SchemeName,
    /// Phase-1 decision; defaults to 0.5 for f1 and 0 for f2.
    pub fixed_y: Option<f64>,
    /// Overrides the bins-per-axis schedule.
    pub bins_per_axis: Option<usize>,
    #[serde(default)]
    pub regret_mode: RegretMode,
    pub output: Option<PathBuf>,
    /// Per-trial rows (select) or per-trial checkpoint regret (regret).
    pub trial_output: Option<PathBuf>,
    pub constants: Option<ConstantsConfig>,
    pub chernoff: Option<ChernoffConfig>,
    pub diagnose: Option<DiagnoseConfig>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    /// Checks the fields `command` needs.
    pub fn validate(&self, command: Command) -> Result<(), ConfigError> {
        if let Some(c) = self.command {
            if c != command {
                return Err(invalid(format!("config is for {c:?}, not {command:?}")));
            }
        }
        if self.d_x == 0 || self.d_x > 16 {
            return Err(invalid("d_x must be between 1 and 16"));
        }
        if !(self.xi > 0.0 && self.xi < 1.0) {
            return Err(invalid("xi must lie in (0, 1)"));
        }
        if let Some(y) = self.fixed_y {
            if !(0.0..=1.0).contains(&y) {
                return Err(invalid("fixed_y must lie in [0, 1]"));
            }
        }
        if self.bins_per_axis == Some(0) {
            return Err(invalid("bins_per_axis must be at least 1"));
        }
        match command {
            Command::Select | Command::Regret => {
                if self.trials == 0 {
                    return Err(invalid("trials must be at least 1"));
                }
                if self.sigma.is_empty() || self.c_lambda.is_empty() {
                    return Err(invalid("sigma and c_lambda lists must be non-empty"));
                }
                if self.sigma.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
                    return Err(invalid("sigma values must be finite and non-negative"));
                }
                if self.c_lambda.iter().any(|c| !(*c >= 0.0 && c.is_finite())) {
                    return Err(invalid("c_lambda values must be finite and non-negative"));
                }
                if self.scheme != SchemeName::CountProportional && self.constants.is_none() {
                    return Err(invalid(format!("scheme {} needs a [constants] table", self.scheme.label())));
                }
            }
            _ => {}
        }
        match command {
            Command::Select => {
                if self.n.is_empty() {
                    return Err(invalid("n list must be non-empty"));
                }
                if self.n.contains(&0) {
                    return Err(invalid("n values must be positive"));
                }
            }
            Command::Regret => {
                if self.horizons.is_empty() {
                    return Err(invalid("T list must be non-empty"));
                }
                if self.horizons.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(invalid("T list must be strictly ascending"));
                }
                if self.sigma.len() != 1 || self.c_lambda.len() != 1 {
                    return Err(invalid("regret takes exactly one sigma and one c_lambda"));
                }
            }
            Command::Diagnose => {
                let d = self.diagnose.clone().unwrap_or_default();
                if d.samples == 0 || d.bins_per_axis == 0 {
                    return Err(invalid("diagnose.samples and diagnose.bins_per_axis must be positive"));
                }
                if d.relevant.iter().any(|&i| i >= self.d_x) {
                    return Err(invalid("diagnose.relevant indices must be below d_x"));
                }
                if !(d.gamma > 0.0 && d.gamma < 1.0) {
                    return Err(invalid("diagnose.gamma must lie in (0, 1)"));
                }
            }
            Command::Chernoff => {
                let Some(c) = &self.chernoff else {
                    return Err(invalid("chernoff needs a [chernoff] table"));
                };
                let has_alloc = c.n.is_some() || c.m_bins.is_some();
                if c.p.is_none() && !has_alloc {
                    return Err(invalid("[chernoff] needs p, or n/m_bins/h/b0/b1"));
                }
                if let Some(p) = &c.p {
                    if p.is_empty() || p.iter().any(|v| !(*v > 0.0 && *v <= 1.0)) {
                        return Err(invalid("chernoff.p entries must lie in (0, 1]"));
                    }
                    if c.brute_force && !(2..=3).contains(&p.len()) {
                        return Err(invalid("brute_force supports 2 or 3 bins"));
                    }
                }
                if has_alloc && (c.n.is_none() || c.m_bins.is_none() || c.h.is_none() || c.b0.is_none() || c.b1.is_none())
                {
                    return Err(invalid("worst-case allocation needs n, m_bins, h, b0 and b1"));
                }
                if c.m_bins == Some(0) {
                    return Err(invalid("chernoff.m_bins must be positive"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_select_config() {
        let cfg = ExperimentConfig::from_toml(
            r#"
            env = "f2"
            sigma = [1.0, 2.0]
            c_lambda = [0.22]
            n = [200, 400]
            trials = 3
            seed = 9
            scheme = "count_proportional"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.env, EnvName::F2);
        assert_eq!(cfg.d_x, 3);
        assert_eq!(cfg.xi, 0.5);
        cfg.validate(Command::Select).unwrap();
        assert!(cfg.validate(Command::Regret).is_err());
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(ExperimentConfig::from_toml("sigmas = [1.0]").is_err());
        let cfg = ExperimentConfig::from_toml("sigma=[1.0]\nc_lambda=[0.2]\nn=[10]\ntrials=0").unwrap();
        assert!(cfg.validate(Command::Select).is_err());
        let cfg = ExperimentConfig::from_toml("sigma=[1.0]\nc_lambda=[0.2]\nn=[10]\nscheme=\"prop_global\"").unwrap();
        assert!(cfg.validate(Command::Select).is_err());
        let cfg = ExperimentConfig::from_toml("sigma=[1.0]\nc_lambda=[0.2]\nT=[100, 50]").unwrap();
        assert!(cfg.validate(Command::Regret).is_err());
    }

    #[test]
    fn chernoff_table_requirements() {
        let cfg = ExperimentConfig::from_toml("[chernoff]\np = [0.1, 0.2]\nbrute_force = true").unwrap();
        cfg.validate(Command::Chernoff).unwrap();
        let cfg = ExperimentConfig::from_toml("[chernoff]\nn = 30").unwrap();
        assert!(cfg.validate(Command::Chernoff).is_err());
        let cfg = ExperimentConfig::from_toml("command = \"select\"\n[chernoff]\np = [0.1]").unwrap();
        assert!(cfg.validate(Command::Chernoff).is_err());
    }
}
