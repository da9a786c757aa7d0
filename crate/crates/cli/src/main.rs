use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod render;

#[derive(Debug, Parser)]
#[command(name = "coarse-monoid", version, about = "Coarse geometry of finitely generated monoids")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Monoid spec document (JSON).
    #[arg(long, global = true)]
    pub monoid: Option<PathBuf>,
    /// Word-length bound for every search.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    pub horizon: u32,
    /// Ball radius R.
    #[arg(short = 'R', long, global = true, default_value = "1")]
    pub radius: String,
    #[arg(long, global = true)]
    pub lambda: Option<String>,
    #[arg(long, global = true)]
    pub epsilon: Option<String>,
    #[arg(long, global = true)]
    pub mu: Option<String>,
    /// Radius of the sampled ball of space points; defaults to half the horizon.
    #[arg(long, global = true)]
    pub sample: Option<u32>,
    /// Also write the report to this path.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Echoed into the report; all searches are exhaustive.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Include wall-clock duration in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance between two elements or Cayley-graph points.
    Dist { x: String, y: String },
    /// Ball around an element.
    Ball { center: String, radius: String, kind: String },
    /// Run one property check.
    Check(CheckArgs),
    /// Extract a generating set and quasi-isometry constants.
    SvarcMilnor {
        /// Radius for pairwise checks; defaults to the horizon.
        #[arg(long)]
        pair_radius: Option<u32>,
    },
    /// Submonoid pipeline for M with right units P and MP = N.
    Submonoid {
        #[command(flatten)]
        sub: SubmonoidArgs,
        /// Comma-separated right units P.
        #[arg(long, value_delimiter = ',', required = true)]
        units: Vec<String>,
    },
    /// Free-product pipeline for a free_product spec.
    FreeProduct,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub which: CheckKind,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub side: SideArg,
    /// Finite-geometric-type threshold.
    #[arg(long, default_value_t = 5)]
    pub threshold: usize,
    /// Space sampled by `quasimetric`: monoid elements with the word metric,
    /// or vertices and edge midpoints of the continuous Cayley graph.
    #[arg(long, value_enum, default_value_t = SpaceArg::Word)]
    pub space: SpaceArg,
    #[command(flatten)]
    pub sub: SubmonoidArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Word,
    Gamma,
}

#[derive(Debug, Clone, Args)]
pub struct SubmonoidArgs {
    /// Built-in submonoid: `ends-in-identity` for free products, or `whole`.
    #[arg(long)]
    pub submonoid: Option<String>,
    /// Comma-separated generators of the submonoid.
    #[arg(long, value_delimiter = ',')]
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Axioms,
    Qi,
    Quasimetric,
    Cancellative,
    Fgt,
    Unitary,
    Action,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = commands::run(&cli);
    let elapsed = cli.common.timing.then(|| start.elapsed());
    let (doc, code) = render::document(&cli, outcome, elapsed);
    let text = serde_json::to_string_pretty(&doc).expect("serializable report");
    println!("{text}");
    if let Some(path) = &cli.common.json {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
