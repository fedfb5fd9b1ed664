use blowup_cli::commands::{cmd_check, cmd_oracle, cmd_picard, cmd_riccati, cmd_run, cmd_sweep};
use blowup_cli::config::{RawConfig, RunConfig, SweepConfig};
use blowup_cli::{exit, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "blowup",
    version,
    about = "Pseudo-spectral runs of u_t = Δu + |∇u|² b"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Configuration file (flat `section.key = value`).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed, overriding `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration and write series, summary and plots.
    Run(Common),
    /// Picard iteration on one or more horizons.
    Picard(Common),
    /// Closed-form Riccati blow-up time and values.
    Riccati {
        #[arg(long)]
        c1: f64,
        #[arg(long)]
        c2: f64,
        #[arg(long = "I0")]
        i0: f64,
        /// Times at which to evaluate J.
        #[arg(long = "t", value_delimiter = ',')]
        times: Vec<f64>,
    },
    /// Evaluate the blow-up preconditions for the initial datum.
    Check(Common),
    /// Run a parameter sweep on a worker pool.
    Sweep(Common),
    /// Compare a run with a closed-form solution.
    Oracle(Common),
}

fn load(c: &Common) -> Result<(RawConfig, PathBuf)> {
    let mut raw = RawConfig::load(&c.config)?;
    if let Some(seed) = c.seed {
        raw.set("seed", seed.to_string())?;
    }
    let out = c
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(raw.get("output.dir").unwrap_or("out")));
    Ok((raw, out))
}

fn dispatch(cli: Cli) -> Result<i32> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Run(c) => {
            let (raw, out) = load(&c)?;
            cmd_run(&RunConfig::from_raw(&raw)?, &out, &mut stdout)
        }
        Command::Picard(c) => {
            let (raw, out) = load(&c)?;
            cmd_picard(&RunConfig::from_raw(&raw)?, &out, &mut stdout)
        }
        Command::Check(c) => {
            let (raw, _) = load(&c)?;
            cmd_check(&RunConfig::from_raw(&raw)?, &mut stdout)
        }
        Command::Sweep(c) => {
            let (raw, out) = load(&c)?;
            cmd_sweep(&SweepConfig::from_raw(&raw)?, &out, &mut stdout)
        }
        Command::Oracle(c) => {
            let (raw, out) = load(&c)?;
            cmd_oracle(&RunConfig::from_raw(&raw)?, &out, &mut stdout)
        }
        Command::Riccati { c1, c2, i0, times } => cmd_riccati(c1, c2, i0, &times, &mut stdout),
    }
}

fn main() {
    let code = match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    if code != exit::OK {
        std::process::exit(code);
    }
}
