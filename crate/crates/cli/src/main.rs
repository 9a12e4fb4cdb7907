//! `mmfilt`: simulate, fit, synthesize, score and sweep acoustic ladder filters.
//!
//! Exit status is 0 on success, 1 when the computation fails (one-line
//! diagnostic on stderr, no outputs written) and 2 on usage errors.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod spans;
mod svg;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{FitArgs, MetricsArgs, SimulateArgs, SweepArgs, SynthesizeArgs};

#[derive(Parser, Debug)]
#[command(
    name = "mmfilt",
    version,
    about = "Acoustic resonator ladder filter toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a design file on a grid: Touchstone response and metrics
    Simulate(SimulateArgs),
    /// Fit resonator parameters to a one-port measurement
    Fit(FitArgs),
    /// Tune a three-resonator ladder toward the [spec] of a design file
    Synthesize(SynthesizeArgs),
    /// Passband metrics and an optional plot of a two-port response
    Metrics(MetricsArgs),
    /// Metrics over a range of one design value
    Sweep(SweepArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outputs = match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Fit(a) => commands::fit(a),
        Command::Synthesize(a) => commands::synthesize(a),
        Command::Metrics(a) => commands::metrics(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match outputs.and_then(output::Outputs::commit) {
        Ok(stdout) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(stdout.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
