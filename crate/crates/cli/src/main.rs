//! `tns`: pseudospectral tamed Navier-Stokes runs with jump noise.
//!
//! Subcommands: `skeleton` (deterministic controlled equation), `simulate`
//! (jump SDE ensemble), `controlled` (thinned-measure ensemble),
//! `sweep-eps` (small-noise convergence experiment), `verify` (operator
//! and law checks), `cost` (entropy cost of a control file).

mod commands;
mod config;
mod error;
mod fmt;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Suite;
use config::{load_config, RunConfig};
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "tns", version, about = "Tamed Navier-Stokes with jump noise")]
struct Cli {
    /// Cap worker threads for parallel ensembles.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the deterministic skeleton equation for a control.
    Skeleton {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config's `output`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a jump-SDE ensemble at noise scale `solver.eps`.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a controlled (thinned-measure) ensemble.
    Controlled {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Small-noise convergence experiment over `experiment.eps_ladder`.
    SweepEps {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run verification suites; nonzero exit on any failing check.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Scale the trial counts (default 1000 operator trials).
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the entropy cost L_T(g) of a control file to 12 digits.
    Cost {
        #[arg(long)]
        control: PathBuf,
        /// Comma-separated mark weights, e.g. `1.0,0.5`.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn base_dir_of(config_path: &Path) -> PathBuf {
    config_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn load_with_seed(path: &Path, seed: Option<u64>) -> CliResult<RunConfig> {
    let mut cfg = load_config(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn dispatch(cli: Cli) -> CliResult<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global()
            .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Skeleton { config, out, seed } => {
            let cfg = load_with_seed(&config, seed)?;
            let out_dir = commands::resolve_out_dir(&cfg, out)?;
            commands::cmd_skeleton(&cfg, &base_dir_of(&config), &out_dir)
        }
        Command::Simulate { config, out, seed } => {
            let cfg = load_with_seed(&config, seed)?;
            let out_dir = commands::resolve_out_dir(&cfg, out)?;
            commands::cmd_simulate(&cfg, &base_dir_of(&config), &out_dir)
        }
        Command::Controlled { config, out, seed } => {
            let cfg = load_with_seed(&config, seed)?;
            let out_dir = commands::resolve_out_dir(&cfg, out)?;
            commands::cmd_controlled(&cfg, &base_dir_of(&config), &out_dir)
        }
        Command::SweepEps { config, out, seed } => {
            let cfg = load_with_seed(&config, seed)?;
            let out_dir = commands::resolve_out_dir(&cfg, out)?;
            commands::cmd_sweep_eps(&cfg, &base_dir_of(&config), &out_dir)
        }
        Command::Verify {
            suite,
            config,
            trials,
            out,
            seed,
        } => {
            let (cfg, base) = match config {
                Some(path) => (Some(load_config(&path)?), base_dir_of(&path)),
                None => (None, PathBuf::from(".")),
            };
            commands::cmd_verify(suite, cfg.as_ref(), &base, trials, out.as_deref(), seed)
        }
        Command::Cost {
            control,
            weights,
            config,
        } => {
            let cfg = config.map(|p| load_config(&p)).transpose()?;
            commands::cmd_cost(&control, weights.as_deref(), cfg.as_ref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
