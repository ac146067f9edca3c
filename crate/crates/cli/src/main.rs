//! `twg <command> --config <path> [--out <dir>]`
//!
//! Exit status: 0 on success, 1 for configuration errors, 2 for numerical
//! failures (degenerate target, threshold collision, lost resonance, ...).

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use twisted_waveguide::Error;

use crate::commands::Command;
use crate::config::ConfigError;
use crate::output::{write_run, Provenance, Report};

#[derive(Debug, Parser)]
#[command(name = "twg", version, about = "Resonance widths of weakly twisted waveguides")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<ConfigError>().is_some() {
            return 1;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::InvalidInput(_)
                | Error::InvalidPolygon(_)
                | Error::Parse(_)
                | Error::GridMismatch
                | Error::MeshTooCoarse { .. }
                | Error::NonDecaying { .. }
                | Error::BranchCut(_) => 1,
                _ => 2,
            };
        }
    }
    1
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let start = Instant::now();
    let cfg = config::load(&cli.config)?;
    let outcome = commands::run(cli.command, &cfg)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let solver = serde_json::json!({
        "resolvent": cfg.width_options().resolvent,
        "threshold_guard": cfg.config.solver.threshold_guard,
        "scaled": cfg.scaled_options(),
    });
    let mut report = Report {
        command: cli.command.name(),
        config_hash: cfg.hash.clone(),
        results: outcome.results,
        artifacts: Vec::new(),
        provenance: Provenance {
            tool: "twg",
            version: env!("CARGO_PKG_VERSION"),
            solver,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
    };
    write_run(&cli.out, &mut report, &outcome.tables)?;
    println!("{}", cli.out.join("report.json").display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
