use std::path::PathBuf;
use std::process::ExitCode;

use bvlasso::config::{Command, ExperimentConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bvlasso", version, about = "Binning-and-voting LASSO experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Variable-selection scores across phase-1 sample sizes.
    Select(Args),
    /// Cumulative regret of the two-phase policy and its benchmarks.
    Regret(Args),
    /// Covariance diagnostics for uniform covariates in one bin.
    Diagnose(Args),
    /// Closed-form Chernoff voting weights and worst-case allocation.
    Chernoff(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long)]
    config: PathBuf,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output CSV; overrides `output` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Select(a) => (Command::Select, a),
        Cmd::Regret(a) => (Command::Regret, a),
        Cmd::Diagnose(a) => (Command::Diagnose, a),
        Cmd::Chernoff(a) => (Command::Chernoff, a),
    };
    let cfg = match ExperimentConfig::load(&args.config).and_then(|c| c.validate(command).map(|_| c)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(jobs) = args.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot start {jobs} workers: {e}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    }
    let out = bvlasso::output_path(args.out, &cfg);
    match bvlasso::run(command, &cfg, out.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
