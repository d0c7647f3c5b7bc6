//! `qstab`: parameter sweeps, discrimination experiments and state dumps
//! for two-state Markov quantum sources.

mod angle;
mod commands;
mod format;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use angle::parse_angle;

#[derive(Parser)]
#[command(name = "qstab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Path prefix for every file written; the directory must exist.
    #[arg(long, default_value = "qstab")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Probability that every length-k window holds at most l errors, over
    /// an (epsilon, delta) grid.
    SparsitySurface(SparsityArgs),
    /// Fidelity between the Markov state and the stationary product state
    /// for n = 1..n-max.
    FidelityDecay(FidelityArgs),
    /// Trace distance between the hypotheses delta0 = 1 - delta and
    /// delta1 = delta over a grid of delta.
    TraceDistance(TraceArgs),
    /// Exact and simulated discrimination of two boundary hypotheses.
    Verify(VerifyArgs),
    /// Write a density matrix as JSON.
    StateDump(DumpArgs),
}

#[derive(Args)]
pub struct SparsityArgs {
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// Window length.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Errors allowed per window.
    #[arg(long, default_value_t = 1)]
    l: usize,
    #[arg(long, default_value_t = 1.0)]
    p0: f64,
    /// Points per axis, endpoints included.
    #[arg(long, default_value_t = 41)]
    grid: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
pub struct FidelityArgs {
    #[arg(long, default_value_t = 0.5)]
    p0: f64,
    #[arg(long, default_value_t = 0.3)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Angle between the two emitted states, e.g. 1.047 or pi/3.
    #[arg(long, default_value = "pi/3", value_parser = parse_angle)]
    theta: f64,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    /// Typicality slack in bits.
    #[arg(long, default_value_t = 0.01)]
    tau: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
pub struct TraceArgs {
    #[arg(long, default_value_t = 0.3)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    p0: f64,
    #[arg(long, default_value = "pi/3", value_parser = parse_angle)]
    theta: f64,
    #[arg(long, default_value_t = 7)]
    n: usize,
    #[arg(long, default_value_t = 21)]
    grid: usize,
    #[arg(long, default_value_t = 0.01)]
    tau: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0.3)]
    epsilon0: f64,
    /// Must be below delta1.
    #[arg(long, default_value_t = 0.2)]
    delta0: f64,
    #[arg(long, default_value_t = 0.8)]
    delta1: f64,
    #[arg(long, default_value = "pi/3", value_parser = parse_angle)]
    theta: f64,
    #[arg(long, default_value_t = 0.5)]
    p0: f64,
    #[arg(long, default_value_t = 7)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.01)]
    tau: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    /// Mixture over all strings weighted by the chain.
    Markov,
    /// Product of the per-step marginals.
    Tensored,
    /// Stationary single-emission state to the n-th tensor power.
    StationaryPower,
    /// Initial single-emission state (weight p0 on the good state) to the
    /// n-th tensor power.
    Iid,
}

#[derive(Args)]
pub struct DumpArgs {
    #[arg(long, value_enum, default_value = "markov")]
    which: Which,
    #[arg(long, default_value_t = 0.3)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, default_value_t = 0.5)]
    p0: f64,
    #[arg(long, default_value = "pi/3", value_parser = parse_angle)]
    theta: f64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[command(flatten)]
    output: Output,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::SparsitySurface(a) => commands::sparsity_surface(a),
        Command::FidelityDecay(a) => commands::fidelity_decay(a),
        Command::TraceDistance(a) => commands::trace_distance(a),
        Command::Verify(a) => commands::verify(a),
        Command::StateDump(a) => commands::state_dump(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qstab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
