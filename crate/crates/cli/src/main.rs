#![forbid(unsafe_code)]

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use wmobs_cli::commands::{cmd_plot, cmd_run, cmd_validate};
use wmobs_cli::config::CLI_SCHEMA_VERSION;
use wmobs_core::harness::REPORT_SCHEMA_VERSION;

/// Deterministic watermark attribution experiments: run scenarios or
/// sweeps from a JSON config and emit reports plus SVG charts.
#[derive(Parser)]
#[command(name = "wmobs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario or sweep described by a JSON config file
    Run {
        /// Path to the JSON config document
        config: PathBuf,
        /// Output directory, overriding the config's out_dir
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed override; beats WM_OBS_SEED and the config value
        #[arg(long)]
        seed: Option<u64>,
        /// Generation thread count override
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Parse and validate a config without running it
    Validate {
        /// Path to the JSON config document
        config: PathBuf,
    },
    /// Re-render an SVG chart from existing report.json files
    Plot {
        /// report.json files produced by `run`
        reports: Vec<PathBuf>,
        /// Output SVG path
        #[arg(long, default_value = "plot.svg")]
        out: PathBuf,
        /// X axis: "samples" for learning curves, or a sweep axis name
        #[arg(long, default_value = "samples")]
        x: String,
    },
    /// Print tool and schema versions
    Version,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version exit 0; genuine usage mistakes are
            // input errors and exit 1.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match &cli.command {
        Command::Run {
            config,
            out,
            seed,
            workers,
        } => cmd_run(config, out.as_deref(), *seed, *workers),
        Command::Validate { config } => cmd_validate(config),
        Command::Plot { reports, out, x } => cmd_plot(reports, out, x),
        Command::Version => {
            wmobs_cli::sayln!(
                "wmobs {} (config schema {CLI_SCHEMA_VERSION}, report schema {REPORT_SCHEMA_VERSION})",
                env!("CARGO_PKG_VERSION")
            );
            Ok(())
        }
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
