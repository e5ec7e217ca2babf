//! `fhaci`: outage, capacity and waveform optimization for frequency-hopping
//! ad hoc networks with adjacent-channel interference.
//!
//! Exit codes: 0 success, 2 invalid configuration or arguments, 3 numeric
//! failure (including a failed `validate` suite).

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "fhaci", version, about)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// System configuration (JSON). Defaults to the reference network.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for every Monte-Carlo component.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Rate/threshold table; built and saved to `<out>/rate_table.json` when
    /// omitted and not already there.
    #[arg(long, global = true)]
    table: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Outage probability of one waveform.
    Outage(commands::outage::OutageArgs),
    /// Best capacity over (R, h) as a function of L, per ψ.
    SweepL(commands::sweep::SweepLArgs),
    /// Best capacity over (L, R, h) as a function of ψ, per fading model.
    SweepPsi(commands::sweep::SweepPsiArgs),
    /// Optimal waveform for each network/fading/shadowing combination.
    Table1(commands::sweep::Table1Args),
    /// Optimal ψ versus normalized source distance, per path-loss exponent.
    Fig3(commands::sweep::Fig3Args),
    /// Self-checks against closed forms and simulation.
    Validate(commands::validate::ValidateArgs),
    /// Estimates the information-rate table.
    BuildTable(commands::table::BuildTableArgs),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let c = &cli.common;
    match cli.command {
        Command::Outage(a) => commands::outage::run(c, &a),
        Command::SweepL(a) => commands::sweep::sweep_l(c, &a),
        Command::SweepPsi(a) => commands::sweep::sweep_psi(c, &a),
        Command::Table1(a) => commands::sweep::table1(c, &a),
        Command::Fig3(a) => commands::sweep::fig3(c, &a),
        Command::Validate(a) => commands::validate::run(c, &a),
        Command::BuildTable(a) => commands::table::build(c, &a),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<fhaci_core::Error>() {
            return if e.is_numeric() { 3 } else { 2 };
        }
        if let Some(f) = cause.downcast_ref::<Failure>() {
            return match f {
                Failure::Config(_) => 2,
                Failure::Numeric(_) => 3,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
