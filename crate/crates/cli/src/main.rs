mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Random generating sets of lattices: exact experiments and certified bounds.
#[derive(Parser, Debug)]
#[command(name = "latgen", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frequency of unimodular n x m matrices with columns drawn from random parallelepipeds.
    Unimodular(UnimodularArgs),
    /// Exact coprimality probabilities p_N for N = 1..N_max.
    Coprime(CoprimeArgs),
    /// Full-rank lower bounds, alpha_n, ideal probabilities and window thresholds.
    BoundsTable(BoundsArgs),
    /// Lattice point counts in windows and hyperplanes against their bounds.
    LemmaVerify(LemmaArgs),
    /// Exact total variation distance of the induced coset distribution.
    TvCheck(TvArgs),
    /// Empirical probability that n window samples are linearly independent.
    FullrankCheck(FullrankArgs),
}

#[derive(Args, Debug, Default)]
pub struct Common {
    /// Output CSV path (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Args, Debug)]
pub struct UnimodularArgs {
    #[command(flatten)]
    pub common: Common,
    /// Dimensions, e.g. `3`, `1..4` or `1,2,5`.
    #[arg(long)]
    pub n: Option<String>,
    /// Fixed number of columns (default m = n + 1).
    #[arg(long)]
    pub m: Option<u32>,
    /// Coordinate bound C; repeat for several runs. Accepts `10000`, `1e18`, `10^18`.
    #[arg(long = "C")]
    pub c: Vec<String>,
    /// Parallelepipeds per n.
    #[arg(long)]
    pub reps: Option<u32>,
    /// Matrices per parallelepiped.
    #[arg(long)]
    pub samples: Option<u32>,
    /// `rejection` or `coset`.
    #[arg(long)]
    pub sampler: Option<String>,
    /// Rejection attempts per sample before giving up
    #[arg(long)]
    pub max_rejects: Option<u64>,
    /// 1000 parallelepipeds, C = 10^18, n = 1..15 (hours of compute).
    #[arg(long)]
    pub paper_scale: bool,
    /// JSON experiment configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CoprimeArgs {
    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub n_max: u64,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    pub n_max: u32,
    /// Decimal digits for zeta enclosures.
    #[arg(long, default_value_t = 30)]
    pub precision: u32,
}

#[derive(Args, Debug)]
pub struct LemmaArgs {
    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Lattice JSON file; the built-in suite is used when omitted.
    #[arg(long)]
    pub lattice: Option<PathBuf>,
    /// Window sides for `--lattice` (repeatable, rational).
    #[arg(long)]
    pub b: Vec<String>,
}

#[derive(Args, Debug)]
pub struct TvArgs {
    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Lattice JSON file; the built-in suite is used when omitted.
    #[arg(long, requires_all = ["sub", "b1"])]
    pub lattice: Option<PathBuf>,
    /// Sublattice JSON file.
    #[arg(long)]
    pub sub: Option<PathBuf>,
    /// Window side for `--lattice`
    #[arg(long)]
    pub b1: Option<String>,
}

#[derive(Args, Debug)]
pub struct FullrankArgs {
    #[command(flatten)]
    pub common: Common,
    /// Lattice JSON file (default Z^n).
    #[arg(long)]
    pub lattice: Option<PathBuf>,
    /// Dimension of Z^n when no lattice is given.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Window side (default: the threshold rounded up).
    #[arg(long)]
    pub b: Option<String>,
    /// Sampled n-tuples
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Run below the threshold; the result is reported but not asserted.
    #[arg(long)]
    pub allow_below_threshold: bool,
}

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Pass,
    AssertionFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::AssertionFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
