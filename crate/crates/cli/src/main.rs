use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

/// Exact isospectrality checks and searches for lens spaces.
#[derive(Parser)]
#[command(name = "isospec", version)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "ISOSPEC_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Find all pairs that are p-isospectral for every p.
    Search(commands::SearchArgs),
    /// Run the deciders on two lens spaces.
    Check(commands::CheckArgs),
    /// Print a p-form or τ spectrum.
    Spectrum(commands::SpectrumArgs),
    /// Generating functions: Ψ coefficients, Q-equality, series prefixes.
    Genfun(commands::GenfunArgs),
    /// Explicit families and the predicates on exponent tuples.
    Family(commands::FamilyArgs),
    /// Families with parameters distinct up to sign, for prime q.
    Ikeda(commands::IkedaArgs),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    match cli.command {
        Command::Search(a) => commands::search(a),
        Command::Check(a) => commands::check(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Genfun(a) => commands::genfun(a),
        Command::Family(a) => commands::family(a),
        Command::Ikeda(a) => commands::ikeda(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            // bad input is 2, like clap's usage errors; internal failures are 1
            let invalid = match e.downcast_ref::<isospec::Error>() {
                Some(isospec::Error::Overflow(_)) => false,
                Some(_) => true,
                None => e.downcast_ref::<commands::UsageError>().is_some(),
            };
            ExitCode::from(if invalid { 2 } else { 1 })
        }
    }
}
