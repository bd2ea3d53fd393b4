use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ia_core::harness::{cmd_compare, cmd_run, cmd_sweep, ExperimentConfig, RunSummary};
use ia_core::IaError;

/// Transmitter-only interference alignment simulator.
#[derive(Parser)]
#[command(name = "onesided-ia", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Base seed; overrides the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV; overrides the config file. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize one channel draw and write the per-sweep trace.
    Run(Common),
    /// Ergodic sum rate of the configured algorithm over `snr_db`.
    Sweep(Common),
    /// Both algorithms on identical draws over `snr_db`.
    Compare(Common),
}

type Handler = fn(&ExperimentConfig, Box<dyn Write>) -> Result<RunSummary, IaError>;

const EXIT_INPUT: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;

fn execute(cli: Cli) -> Result<RunSummary, IaError> {
    let (common, cmd): (&Common, Handler) = match &cli.command {
        Command::Run(c) => (c, |cfg, w| cmd_run(cfg, w)),
        Command::Sweep(c) => (c, |cfg, w| cmd_sweep(cfg, w)),
        Command::Compare(c) => (c, |cfg, w| cmd_compare(cfg, w)),
    };
    let mut config = ExperimentConfig::from_file(&common.config)?;
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    let out_path = common.out.clone().or_else(|| config.output.clone());
    let sink: Box<dyn Write> = match &out_path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    cmd(&config, sink)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(summary) => {
            eprintln!(
                "status: {}  leakage: {:.6e} -> {:.6e}  iterations: {}  wall time: {:.3}s",
                summary.status,
                summary.initial_leakage,
                summary.final_leakage,
                summary.sweeps,
                summary.wall_time.as_secs_f64()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() || matches!(e, IaError::Csv(_)) {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::from(EXIT_NUMERICAL)
            }
        }
    }
}
