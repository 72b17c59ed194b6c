use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod config;
mod diagnose;
mod limit;
mod output;
mod run;
mod theory;

#[derive(Parser)]
#[command(name = "wl-lab", version, about = "Wang-Landau experiments and convergence lab")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed; overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of independent replicas; overrides the config.
    #[arg(long, global = true)]
    pub replicas: Option<usize>,
    /// Output directory (default: $WL_OUT_DIR, then ./wl-out).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Keep every n-th iteration in trace files; overrides the config.
    #[arg(long, global = true)]
    pub stride: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sampler described by --config and write traces, plots and summaries.
    Run,
    /// Predicted fixed-gamma visit proportions for two bins.
    Limit(limit::LimitArgs),
    /// Bounding chains, hitting times, coupling, lattice paths, irreducibility.
    Theory {
        #[command(subcommand)]
        command: theory::TheoryCommand,
    },
    /// Check the target/proposal regularity assumptions on a grid.
    Diagnose(diagnose::DiagnoseArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run => run::run(&cli.global),
        Command::Limit(args) => limit::limit(&args),
        Command::Theory { command } => theory::theory(&cli.global, command),
        Command::Diagnose(args) => diagnose::diagnose(&cli.global, &args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
