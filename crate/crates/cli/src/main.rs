//! `hyperblock`: sample, analyse and partition hypergraph block models.
//!
//! Exit codes: 0 success, 2 invalid argument, 3 i/o, 4 partition failure,
//! 1 anything else. Set `HYPERBLOCK_LOG=info` for per-stage diagnostics.

mod commands;
mod config;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "hyperblock", version, about)]
struct Cli {
    /// Flat TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Overrides the `seed` key of the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for trial-level parallelism. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Primary output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// SNR of every order subset, marking the selected one.
    Snr,
    /// Sample an instance and write it in the hypergraph text format.
    Sample,
    /// Partition a hypergraph file, or a fresh sample, and write the labels.
    Detect {
        /// Hypergraph file to partition instead of sampling one.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Accuracy report (CSV) when truth is known; stderr when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Recovery experiment along the SNR ladder.
    Experiment {
        /// Two-column `snr median_misclassification` summary; stdout when absent.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Spectral-norm concentration sweep over `ns`.
    Conclab,
}

fn load_config(path: Option<&Path>, seed: Option<u64>) -> Result<RunConfig, CliError> {
    let path = path.ok_or_else(|| CliError::Invalid("--config <path> is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut cfg = RunConfig::parse(&text)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if cli.jobs == 0 {
        return Err(CliError::Invalid("--jobs must be at least 1".into()));
    }
    let cfg = load_config(cli.config.as_deref(), cli.seed)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;
    let out = cli.out.as_deref();
    pool.install(|| match &cli.command {
        Command::Snr => commands::emit(out, &commands::snr(&cfg)?),
        Command::Sample => commands::emit(out, &commands::sample(&cfg)?),
        Command::Detect { input, report } => {
            let d = commands::detect(&cfg, input.as_deref())?;
            commands::emit(out, &d.labels)?;
            match (d.report, report) {
                (Some(text), Some(path)) => commands::emit(Some(path), &text),
                (Some(text), None) => {
                    eprint!("{text}");
                    Ok(())
                }
                (None, _) => Ok(()),
            }
        }
        Command::Experiment { summary } => {
            let (records, table) = commands::experiment(&cfg)?;
            commands::emit(out, &records)?;
            commands::emit(summary.as_deref(), &table)
        }
        Command::Conclab => commands::emit(out, &commands::conclab(&cfg)?),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HYPERBLOCK_LOG", "warn"))
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hyperblock: {e}");
            e.exit_code()
        }
    }
}
