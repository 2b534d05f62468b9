//! `kite` — build rateless LDPC codes, measure BER and HARQ throughput, and
//! design density profiles, from JSON configs to CSV/JSON artifacts.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// One error type per exit code: 1 for configuration problems, 2 for
/// runtime/simulation/IO problems.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

#[derive(Parser)]
#[command(
    name = "kite",
    version,
    about = "Rate-compatible rateless LDPC experiments",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Path to the JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Override every seed in the config (construction and simulation).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to $KITE_THREADS, then all cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Output path base (extensions are appended), overriding the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a mother code; write <out>.alist and <out>.json metadata.
    Build(Common),
    /// Fixed-rate BER sweep over an Eb/N0 grid; write <out>.csv.
    Ber(Common),
    /// HARQ throughput over an Es/N0 grid; write <out>.csv.
    Harq(Common),
    /// Greedy profile design; write <out>.json and <out>.trace.csv.
    Optimize(Common),
}

fn init_threads(flag: Option<usize>) -> Result<(), CliError> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("KITE_THREADS") {
            Ok(v) => Some(v.parse::<usize>().map_err(|_| {
                CliError::Config(format!("KITE_THREADS must be a thread count, got {v:?}"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(CliError::Config("thread count must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let common = match &cli.cmd {
        Cmd::Build(c) | Cmd::Ber(c) | Cmd::Harq(c) | Cmd::Optimize(c) => c,
    };
    init_threads(common.threads)?;
    let seed = common.seed;
    let out = common.out.clone();
    match cli.cmd {
        Cmd::Build(c) => {
            let cfg = config::load(&c.config).map_err(CliError::Config)?;
            commands::cmd_build(cfg, seed, out)
        }
        Cmd::Ber(c) => {
            let cfg = config::load(&c.config).map_err(CliError::Config)?;
            commands::cmd_ber(cfg, seed, out)
        }
        Cmd::Harq(c) => {
            let cfg = config::load(&c.config).map_err(CliError::Config)?;
            commands::cmd_harq(cfg, seed, out)
        }
        Cmd::Optimize(c) => {
            let cfg = config::load(&c.config).map_err(CliError::Config)?;
            commands::cmd_optimize(cfg, seed, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
