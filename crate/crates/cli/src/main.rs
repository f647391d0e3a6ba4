//! `fractal-bern`: build, evaluate, certify and integrate Bernstein
//! fractal interpolants from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(a < b)` also rejects NaN

mod config;
mod reproduce;
mod run;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::Flags;

#[derive(Parser)]
#[command(name = "fractal-bern", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the coloured triangle partition as a mesh CSV.
    Mesh(Flags),
    /// Construct the IFS and print its maps.
    Build(Flags),
    /// Hyperbolicity certificate for the IFS.
    Check(Flags),
    /// Evaluate the interpolant at points or on a grid.
    Eval(Flags),
    /// Chaos-game point cloud of the attractor.
    Attractor(Flags),
    /// Closed-form fractal integral, with the reference value for presets.
    Integrate(Flags),
    /// Comparison table for a worked example.
    Reproduce {
        /// ex5.1, ex5.2, ex5.3, table1 .. table4
        target: Option<String>,
        #[command(flatten)]
        flags: Flags,
    },
}

fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("FRACTAL_BERN_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("FRACTAL_BERN_THREADS={raw:?} is not a count"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| dispatch(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    let (verb, flags, target) = match &cli.command {
        Command::Mesh(f) => ("mesh", f, None),
        Command::Build(f) => ("build", f, None),
        Command::Check(f) => ("check", f, None),
        Command::Eval(f) => ("eval", f, None),
        Command::Attractor(f) => ("attractor", f, None),
        Command::Integrate(f) => ("integrate", f, None),
        Command::Reproduce { target, flags } => ("reproduce", flags, target.as_deref()),
    };
    let cfg = flags.resolve()?;
    run::validate(verb, &cfg)?;
    match verb {
        "mesh" => run::mesh(&cfg),
        "build" => run::build(&cfg),
        "check" => run::check(&cfg),
        "eval" => run::eval(&cfg),
        "attractor" => run::attractor(&cfg),
        "integrate" => run::integrate(&cfg),
        _ => reproduce::reproduce(&cfg, target),
    }
}
