use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "legendre-spectra", version, about = "Legendre series products, truncation bounds and spectral diffusion solves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand a built-in function (or re-read a coefficient file) to a given degree.
    Expand(ExpandArgs),
    /// Legendre coefficients of the product of two series files.
    Product(ProductArgs),
    /// Tabulate the closed-form truncation bound over a range of M.
    Bounds(BoundsArgs),
    /// Solve the diffusion problem described by a JSON file.
    Solve(SolveArgs),
    /// Run the built-in acceptance checks.
    Verify,
}

#[derive(Debug, clap::Args)]
pub struct ExpandArgs {
    /// Function name (exp, sin_k:<k>, runge, manufactured_g, poly:[c0,c1,...])
    /// or the path of an `n,coefficient` CSV file.
    pub source: String,
    #[arg(long)]
    pub degree: usize,
    /// Gauss-Legendre order; defaults to degree + margin
    /// (LEGENDRE_SPECTRA_QUAD_MARGIN, 16 if unset).
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProductMode {
    /// Exact coefficients of the product of the two finite series.
    Finite,
    /// M-truncated mu_k series.
    Mu,
}

#[derive(Debug, clap::Args)]
pub struct ProductArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, value_enum, default_value_t = ProductMode::Finite)]
    pub mode: ProductMode,
    /// Truncation M for `--mode mu`.
    #[arg(long = "m", default_value_t = 10)]
    pub m: usize,
    /// Smoothness constant A_1 of the first factor; with --b1 adds a bound column.
    #[arg(long, requires = "b1")]
    pub a1: Option<f64>,
    #[arg(long, requires = "a1")]
    pub b1: Option<f64>,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Smoothness order, 1 or 2.
    #[arg(long, default_value_t = 1)]
    pub j: usize,
    /// First M (default 3 for j = 1, 4 for j = 2).
    #[arg(long)]
    pub m_min: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub m_max: usize,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct SolveArgs {
    pub spec: PathBuf,
    #[arg(long, short)]
    pub out_dir: PathBuf,
    /// Steps at which to reconstruct (default 100,500,1000,2000,3000,4000,
    /// keeping those within the run).
    #[arg(long, value_delimiter = ',')]
    pub report_steps: Option<Vec<usize>>,
    /// Reconstruction orders (default 0,2,4,6 and the file's N_prime, up to N).
    #[arg(long, value_delimiter = ',')]
    pub n_primes: Option<Vec<usize>>,
}
