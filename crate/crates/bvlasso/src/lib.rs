//! Experiment runner for `bvlasso-core`: TOML configuration, parallel trials
//! and CSV output. The `bvlasso` binary is a thin wrapper over [`run`].

pub mod config;
pub mod experiments;
pub mod output;
pub mod stats;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use config::{Command, ExperimentConfig};

fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Runs `command` with a validated config, writing the main table to `out`
/// (standard output when `None`) and any per-trial table to
/// `cfg.trial_output`.
pub fn run(command: Command, cfg: &ExperimentConfig, out: Option<&Path>) -> Result<()> {
    match command {
        Command::Select => {
            let report = experiments::cmd_select(cfg)?;
            output::write_select(&report, open(out)?)?;
            if let Some(p) = &cfg.trial_output {
                output::write_select_trials(&report, open(Some(p))?)?;
            }
        }
        Command::Regret => {
            let report = experiments::cmd_regret(cfg)?;
            output::write_regret(&report, open(out)?)?;
            if let Some(p) = &cfg.trial_output {
                output::write_regret_trials(&report, open(Some(p))?)?;
            }
        }
        Command::Diagnose => output::write_report(&experiments::cmd_diagnose(cfg)?, open(out)?)?,
        Command::Chernoff => output::write_report(&experiments::cmd_chernoff(cfg)?, open(out)?)?,
    }
    Ok(())
}

/// Output destination: the command-line path wins over the config's.
pub fn output_path(cli: Option<PathBuf>, cfg: &ExperimentConfig) -> Option<PathBuf> {
    cli.or_else(|| cfg.output.clone())
}
