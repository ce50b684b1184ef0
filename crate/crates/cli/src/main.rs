//! `polariton` command line.

mod config;
mod output;
mod run;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_config, Mode};
use run::{Context, Failure};

#[derive(Parser)]
#[command(name = "polariton", version, about = "Mean-field and exact polariton dynamics and spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean-field trajectory.
    Dynamics(Common),
    /// Symmetric-subspace Tavis-Cummings propagation.
    Exact(Common),
    /// Mean field, exact and bare molecule on one time grid.
    Compare(Common),
    /// Photon Green's function and transmission.
    Spectrum(Common),
    /// Spectra over a list of Gaussian disorder widths.
    DisorderScan(Common),
    /// One run per value of a swept parameter.
    Sweep(Common),
    /// Mode taken from `run.mode`.
    Run(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for sweeps and scans (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for randomly drawn disorder samples.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match cli.command {
        Command::Dynamics(a) => (Some(Mode::Dynamics), a),
        Command::Exact(a) => (Some(Mode::Exact), a),
        Command::Compare(a) => (Some(Mode::Compare), a),
        Command::Spectrum(a) => (Some(Mode::Spectrum), a),
        Command::DisorderScan(a) => (Some(Mode::DisorderScan), a),
        Command::Sweep(a) => (Some(Mode::Sweep), a),
        Command::Run(a) => (None, a),
    };
    match execute(mode, &args) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("polariton: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}

fn execute(mode: Option<Mode>, args: &Common) -> Result<String, Failure> {
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(Failure::Validation("--threads: must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Validation(format!("--threads: {e}")))?;
    }
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Failure::Validation(format!("--config {}: {e}", args.config.display())))?;
    let cfg = parse_config(&text, mode).map_err(|e| Failure::Validation(e.0))?;
    run::run(
        &cfg,
        &Context {
            out: args.out.clone(),
            seed: args.seed,
        },
    )
}
