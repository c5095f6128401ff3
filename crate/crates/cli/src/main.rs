//! `bjscc`: bounds, Monte-Carlo simulation and rate sweeps for one-shot
//! broadcast joint source-channel coding.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical
//! non-convergence, 4 a simulated row failed its bound under `--strict`.

mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Table;
use crate::config::Loaded;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "bjscc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output CSV path; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; overrides the config.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Single worker; requires a seed.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Exit with code 4 if any simulated row fails its bound.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Evaluate the achievability bounds for an instance.
    Bound,
    /// Simulate the coding schemes and compare with their bounds.
    Simulate,
    /// Sweep achievable rates over the BSC.
    RateCurve,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Bound => "bound",
            Command::Simulate => "simulate",
            Command::RateCurve => "rate-curve",
        }
    }
}

fn load(cli: &Cli) -> Result<Loaded, CliError> {
    let mut loaded = match &cli.config {
        Some(path) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            Loaded::parse(&src)?
        }
        None if matches!(cli.command, Command::RateCurve) => Loaded::empty(),
        None => return Err(CliError::Config("--config is required".into())),
    };
    loaded.check_workers()?;
    let c = &mut loaded.config;
    if cli.seed.is_some() {
        c.seed = cli.seed;
    }
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::Config("--workers: must be at least 1".into()));
        }
        c.workers = Some(w);
    }
    if cli.deterministic {
        c.workers = Some(1);
    }
    Ok(loaded)
}

fn render(
    cmd: Command,
    loaded: &Loaded,
    seed: Option<u64>,
    table: &Table,
) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    writeln!(buf, "# bjscc {} {}", cmd.name(), env!("CARGO_PKG_VERSION"))?;
    match seed {
        Some(s) => writeln!(buf, "# seed = {s}")?,
        None => writeln!(buf, "# seed = none")?,
    }
    for line in loaded.resolved().lines() {
        if line.is_empty() {
            writeln!(buf, "#")?;
        } else {
            writeln!(buf, "# {line}")?;
        }
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(buf);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let loaded = load(cli)?;
    let (table, seed) = match cli.command {
        Command::Bound => (commands::bound(&loaded)?, loaded.config.seed),
        Command::RateCurve => (commands::rate_curve_table(&loaded)?, loaded.config.seed),
        Command::Simulate => {
            let seed = match loaded.config.seed {
                Some(s) => s,
                None if cli.deterministic => {
                    return Err(CliError::Config(
                        "seed: --deterministic needs a seed (config `seed` or --seed)".into(),
                    ))
                }
                None => {
                    let s = rand::random::<u64>() >> 1;
                    eprintln!("bjscc: generated seed {s}");
                    s
                }
            };
            (commands::simulate(&loaded, seed)?, Some(seed))
        }
    };
    let bytes = render(cli.command, &loaded, seed, &table)?;
    match &cli.out {
        Some(path) => std::fs::write(path, &bytes)?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    if let (Command::RateCurve, Ok(spec)) = (cli.command, loaded.rate_curve()) {
        if let Some(script) = spec.plot_script {
            let csv = cli
                .out
                .as_ref()
                .map_or_else(|| "rates.csv".to_owned(), |p| p.display().to_string());
            std::fs::write(&script, commands::plot_script(&csv))?;
        }
    }
    if cli.strict && table.failures > 0 {
        return Err(CliError::Strict(format!(
            "{} simulated row(s) exceeded bound + sigmas * stderr",
            table.failures
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bjscc: {e}");
            e.exit_code()
        }
    }
}
