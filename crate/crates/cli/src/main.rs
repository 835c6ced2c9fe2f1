use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rotorsim_cli::commands;
use rotorsim_core::Variant;

#[derive(Parser)]
#[command(name = "rotorsim", version, about = "Reduced dynamics of an underwater vehicle with two internal rotors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write its trajectory CSV plus a JSON summary.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the invariant audit of a scenario.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate the Hamilton-Jacobi residual of a candidate one-form on a grid.
    Hj {
        #[arg(long)]
        config: PathBuf,
    },
    /// Compare the equations of motion against the bracket engine on random samples.
    Oracle {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        variant: Variant,
        /// Differentiate the Hamiltonian numerically instead of analytically.
        #[arg(long)]
        fd: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { config, out } => commands::simulate(&config, &out),
        Command::Check { config } => commands::check(&config),
        Command::Hj { config } => commands::hj(&config),
        Command::Oracle { n, seed, variant, fd } => commands::oracle(n as usize, seed, variant, fd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rotorsim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
