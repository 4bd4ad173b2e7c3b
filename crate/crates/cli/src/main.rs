use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use polwit::{
    format_sig, grid, parse_state, run_sweep, serialize_state, to_csv, DocumentError, SweepConfig,
};
use polwit_core::polarimeter::SimulationConfig;
use polwit_core::states::{patchwork_pipeline, werner, SectorPartition, WernerParam};
use polwit_core::witness::{concurrence, is_witnessed_entangled};

#[derive(Parser)]
#[command(
    name = "polwit",
    version,
    about = "Entanglement witness toolkit for polarization-entangled photon pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Witness value against singlet weight p over the Werner family, as CSV.
    Sweep {
        /// Number of grid intervals between --p-min and --p-max.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 0.0)]
        p_min: f64,
        #[arg(long, default_value_t = 1.0)]
        p_max: f64,
        /// Coincidences per second.
        #[arg(long, default_value_t = SimulationConfig::DEFAULT_RATE)]
        rate: f64,
        /// Acquisition time per setting, seconds.
        #[arg(long, default_value_t = SimulationConfig::DEFAULT_DURATION)]
        duration: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the closed-form line without sampling counts.
        #[arg(long)]
        analytic_only: bool,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Witness value, PPT minimum eigenvalue, concurrence and verdicts of a state file.
    Witness {
        /// State document, or `-` for stdin.
        state_file: PathBuf,
    },
    /// Emit a state document.
    State {
        #[command(subcommand)]
        kind: StateKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum StateKind {
    /// Werner state with singlet weight p.
    Werner { p: f64 },
    /// Werner state assembled from the sector source with singlet fraction f.
    Patchwork { f: f64 },
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep {
            steps,
            p_min,
            p_max,
            rate,
            duration,
            seed,
            analytic_only,
            out,
        } => {
            let simulation = SimulationConfig::new(rate, duration, seed)?;
            let cfg = SweepConfig::new(grid(p_min, p_max, steps), simulation, analytic_only)?;
            let rows = run_sweep(&cfg)?;
            emit(out.as_ref(), &to_csv(&rows))
        }
        Command::Witness { state_file } => {
            let rho = parse_state(&read_input(&state_file)?)?;
            let v = is_witnessed_entangled(&rho);
            let g = |x| format_sig(x, polwit::sweep::SIG_DIGITS);
            let report = format!(
                "witness_value = {}\nppt_min_eigenvalue = {}\nconcurrence = {}\nwitnessed = {}\nppt_entangled = {}\n",
                g(v.witness_value),
                g(v.ppt_min_eigenvalue),
                g(concurrence(&rho)),
                v.witnessed,
                v.ppt_entangled,
            );
            emit(None, &report)
        }
        Command::State { kind, out } => {
            let rho = match kind {
                StateKind::Werner { p } => werner(WernerParam::new(p)?),
                StateKind::Patchwork { f } => patchwork_pipeline(&SectorPartition::balanced(f)?)?,
            };
            emit(out.as_ref(), &serialize_state(&rho))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<DocumentError>() {
                Some(doc) => ExitCode::from(doc.exit_code()),
                None => ExitCode::FAILURE,
            }
        }
    }
}
