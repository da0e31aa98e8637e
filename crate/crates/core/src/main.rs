use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wavepacket::experiment::{self, ExperimentConfig, SweepAxis};
use wavepacket::{Error, Result};

/// Quartic-oscillator wave-packet benchmark.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact reference and every configured trial family.
    Run {
        /// JSON configuration; defaults to the a = -1 benchmark.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Potential coefficient, overrides the config.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        /// Output directory, overrides the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare W̄ against a refined run along one axis.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        /// truncation, tolerance or dt_out
        #[arg(long)]
        axis: String,
    },
    /// Quick consistency checks on a small problem.
    Selftest,
}

fn load(config: Option<PathBuf>, a: Option<f64>) -> Result<ExperimentConfig> {
    let mut cfg = match config {
        Some(path) => ExperimentConfig::load(&path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(a) = a {
        cfg.a = a;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run { config, a, out } => {
            let mut cfg = load(config, a)?;
            if out.is_some() {
                cfg.output_dir = out;
            }
            let output = experiment::run(&cfg)?;
            for (kind, w) in &output.series.w_bar {
                println!(
                    "{kind:>3}  W_bar = {w:.6}  max rel. energy drift = {:.2e}",
                    output.series.energy_drift[kind]
                );
            }
            println!(
                "exact: max norm drift = {:.2e}, max energy drift = {:.2e}",
                output.exact.max_norm_drift, output.exact.max_energy_drift
            );
            let dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
            let (csv, json) = experiment::write_outputs(&output, &dir)?;
            println!("wrote {} and {}", csv.display(), json.display());
        }
        Command::Sweep { config, a, axis } => {
            let axis: SweepAxis = axis.parse()?;
            let cfg = load(config, a)?;
            let table = experiment::sweep(&cfg, axis)?;
            for (k, base) in &table.baseline {
                println!("{k:>3}  {base:.6} -> {:.6}", table.refined[k]);
            }
            println!("max |dW_bar| = {:.3e}", table.max_abs_change);
        }
        Command::Selftest => {
            let cfg = ExperimentConfig {
                a: 1.0,
                lambda: 0.0,
                t_end: 2.0,
                dt_out: 0.1,
                n_max_var: 63,
                n_max_exact: 95,
                ..ExperimentConfig::default()
            };
            let output = experiment::run(&cfg)?;
            let worst = output
                .series
                .overlap
                .values()
                .flatten()
                .map(|w| (1.0 - w).abs())
                .fold(0.0, f64::max);
            println!("harmonic limit: max |1 - W| = {worst:.2e}");
            if worst > 1e-6 {
                return Err(Error::InvalidArgument(format!(
                    "selftest failed: |1 - W| = {worst:.2e}"
                )));
            }
            println!("ok");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
