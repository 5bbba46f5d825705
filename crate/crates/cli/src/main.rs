//! Command line front end: ingest, events, analyze, stats, fixture.

mod commands;
mod config;
mod fixture;
mod pipeline;
mod reports;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;

/// Exit codes: 0 clean, 1 finished with warnings, 2 fatal error.
#[derive(Parser)]
#[command(name = "newstrace", version, about = "Multilingual news corpus analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest the corpus and write corpus-level reports.
    Ingest {
        /// Path to the run configuration.
        #[arg(long)]
        config: PathBuf,
    },
    /// Build event subsets and write retrieval reports.
    Events {
        /// Path to the run configuration.
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the per-event analysis pipeline end to end.
    Analyze {
        /// Path to the run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Restrict the run to one configured event.
        #[arg(long)]
        event: Option<String>,
    },
    /// Print corpus summary statistics.
    Stats {
        /// Path to the run configuration.
        #[arg(long)]
        config: PathBuf,
    },
    /// Generate the bundled synthetic corpus and its manifest.
    Fixture {
        /// Optional run configuration; its seed is the default seed.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Seed for the corpus generator.
        #[arg(long)]
        seed: Option<u64>,
        /// Total corpus lines, including planted rejects.
        #[arg(long, default_value_t = fixture::DEFAULT_SIZE)]
        size: usize,
        /// Directory to write the fixture into.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(warnings) => {
            for warning in &warnings {
                eprintln!("warning: {warning}");
            }
            if warnings.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Vec<String>> {
    match cli.command {
        Command::Ingest { config } => commands::cmd_ingest(&RunConfig::load(&config)?),
        Command::Events { config } => commands::cmd_events(&RunConfig::load(&config)?),
        Command::Analyze { config, event } => {
            commands::cmd_analyze(&RunConfig::load(&config)?, event.as_deref())
        }
        Command::Stats { config } => commands::cmd_stats(&RunConfig::load(&config)?),
        Command::Fixture { config, seed, size, out } => {
            let from_config = match config {
                Some(path) => RunConfig::load(&path)?.seed,
                None => None,
            };
            let seed = seed.or(from_config).unwrap_or(fixture::DEFAULT_SEED);
            fixture::generate(seed, size, &out)?;
            Ok(Vec::new())
        }
    }
}
