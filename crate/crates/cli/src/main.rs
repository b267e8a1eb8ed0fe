use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use gainatom_cli::{
    emit, run_balance, run_bloch, run_compare, run_oracle, run_pumpsweep, run_spectrum, Overrides,
    RunConfig, SweepSpec, DEFAULT_PUMP_SWEEP, DEFAULT_SPECTRUM_SWEEP,
};

/// Optical response of an incoherently pumped atom.
#[derive(Debug, Parser)]
#[command(name = "gainatom", version)]
struct Cli {
    /// TOML config file; command-line flags override its values.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cross-sections and powers versus probe detuning.
    Spectrum,
    /// Cross-sections versus pump rate, with the critical pumps.
    Pumpsweep,
    /// Population and coherence trajectory.
    Bloch,
    /// Critical pumps and the unitarity residual.
    Balance,
    /// Quantum scattered power against the semiclassical dipole power.
    Compare,
    /// Quadrature checks of the closed forms.
    Oracle,
    /// Print the effective config.
    Config,
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let default_sweep: SweepSpec = match cli.command {
        Command::Pumpsweep => DEFAULT_PUMP_SWEEP,
        _ => DEFAULT_SPECTRUM_SWEEP,
    };
    cfg.apply(&cli.overrides, default_sweep);
    cfg.validate()?;
    for w in cfg.warnings()? {
        eprintln!("warning: {w}");
    }

    let mut ok = true;
    let text = match cli.command {
        Command::Spectrum => run_spectrum(&cfg)?,
        Command::Pumpsweep => run_pumpsweep(&cfg)?,
        Command::Bloch => run_bloch(&cfg)?,
        Command::Balance => run_balance(&cfg)?,
        Command::Compare => run_compare(&cfg)?,
        Command::Oracle => {
            let (report, pass) = run_oracle(&cfg)?;
            ok = pass;
            report
        }
        Command::Config => cfg.to_toml_string()?,
    };
    if let Some(text) = emit(&cfg, &text)? {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        if !text.ends_with('\n') {
            stdout.write_all(b"\n")?;
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: oracle targets outside tolerance");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
