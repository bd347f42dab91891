//! `spar`: command-line front end for the data-availability toolkit.

mod analysis_cmds;
mod report;
mod sim_cmds;
mod tree_cmds;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Parser, Subcommand};

use report::{Format, Output};

#[derive(Parser, Debug)]
#[command(name = "spar", version, about = "LDPC codes, coded Merkle trees, fraud proofs and availability bounds")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, env = "SPAR_SEED", default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw a code from the regular LDPC ensemble and write it as alist.
    GenCode(sim_cmds::GenCodeArgs),
    /// Build a coded Merkle tree over a block file.
    Cmt(tree_cmds::CmtArgs),
    /// Derive a withheld or corrupted tree from an honest one.
    Attack(tree_cmds::AttackArgs),
    /// Hash-aware decoding of a tree file. Exit status 0: decoded,
    /// 2: fraud proof written, 3: unavailable.
    Decode(tree_cmds::DecodeArgs),
    /// Fraud proof operations.
    #[command(subcommand)]
    Fraud(FraudCommand),
    /// Monte-Carlo estimate of the adversary's success probability.
    Simulate(sim_cmds::SimulateArgs),
    /// Peeling failure rate against the erased fraction.
    Threshold(sim_cmds::ThresholdArgs),
    /// Evaluate a success-probability bound, or invert it with --gamma.
    Bounds(analysis_cmds::BoundsArgs),
    /// Least samples per node reaching a target success probability.
    MinSamples(analysis_cmds::MinSamplesArgs),
    /// Sampling, header and total download sizes.
    Cost(analysis_cmds::CostArgs),
    /// Reproduce the reference tables with per-cell deviations.
    Tables(analysis_cmds::TablesArgs),
}

#[derive(Subcommand, Debug)]
enum FraudCommand {
    /// Check a serialized fraud proof against a root. Exit status 0: valid,
    /// 4: rejected.
    Verify(tree_cmds::FraudVerifyArgs),
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let out = Output {
        format: cli.format,
        path: cli.output,
        started: cli.timing.then(Instant::now),
    };
    let seed = cli.seed;
    match cli.command {
        Command::GenCode(a) => sim_cmds::gen_code(a, seed, &out)?,
        Command::Cmt(a) => tree_cmds::cmt(a, seed, &out)?,
        Command::Attack(a) => tree_cmds::attack(a, seed, &out)?,
        Command::Decode(a) => return tree_cmds::decode(a, &out),
        Command::Fraud(FraudCommand::Verify(a)) => return tree_cmds::fraud_verify(a, &out),
        Command::Simulate(a) => sim_cmds::simulate(a, seed, &out)?,
        Command::Threshold(a) => sim_cmds::threshold(a, seed, &out)?,
        Command::Bounds(a) => analysis_cmds::bounds(a, &out)?,
        Command::MinSamples(a) => analysis_cmds::min_samples_cmd(a, &out)?,
        Command::Cost(a) => analysis_cmds::cost(a, &out)?,
        Command::Tables(a) => analysis_cmds::tables(a, &out)?,
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
