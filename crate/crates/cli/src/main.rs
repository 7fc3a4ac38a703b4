//! `renorm`: batch front end for renorm-core.
//!
//! Exit codes: 0 success, 1 invalid input, 2 failed computation.

mod bphz;
mod ck;
mod graphs;
mod greens;
mod hopf;
mod output;
mod series;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use output::{Failure, Output};

#[derive(Parser, Debug)]
#[command(name = "renorm", version, about = "Renormalization combinatorics for φ³ theory: series groups, Hopf algebras, Feynman graphs, BPHZ")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Truncated power series groups: products, reciprocals, composition, reversion, Dyson transform.
    #[command(subcommand)]
    Series(series::SeriesCmd),
    /// Algebraic Hopf algebras: coproduct, antipode, axioms, convolution of characters.
    #[command(subcommand)]
    Hopf(hopf::HopfCmd),
    /// φ³ Feynman graphs: enumeration, counting data, symmetry factors, Graphviz.
    #[command(subcommand)]
    Graphs(graphs::GraphsCmd),
    /// Hopf algebra of Feynman graphs: coproduct, antipode, Z factors, Faà di Bruno inclusion.
    #[command(subcommand)]
    Ck(ck::CkCmd),
    /// BPHZ subtraction: integrands, counterterms, cutoff ladders, Ar = A ⋆ C, Rota–Baxter.
    #[command(subcommand)]
    Bphz(bphz::BphzCmd),
    /// Green's function expansions: tree solutions, connected graphs, partitions.
    #[command(subcommand)]
    Greens(greens::GreensCmd),
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Series(c) => series::run(c),
        Command::Hopf(c) => hopf::run(c),
        Command::Graphs(c) => graphs::run(c),
        Command::Ck(c) => ck::run(c),
        Command::Bphz(c) => bphz::run(c),
        Command::Greens(c) => greens::run(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    renorm_core::bphz::configure_threads_from_env();
    let rendered = run(&cli).and_then(|out| out.render(cli.format));
    let text = match rendered {
        Ok(t) => t,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
