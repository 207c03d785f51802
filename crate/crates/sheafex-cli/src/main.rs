//! `sheafex`: command-line front end. Reports are pretty JSON with sorted
//! keys, so equal arguments give byte-identical output.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sheafex::spectral::SubsetMode;
use sheafex::suite::DEFAULT_SEED;

#[derive(Parser, Debug)]
#[command(name = "sheafex", version, about = "Spectral and coboundary expansion of weighted complexes and sheaves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

/// Flags shared by every command.
#[derive(Args, Debug, Clone)]
struct Common {
    /// Input complex (JSON).
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    /// Seed for sampled modes; echoed in every report.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Number of samples in sampled mode.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Enumeration cap; each command has its own default.
    #[arg(long, env = "SHEAFEX_BUDGET")]
    budget: Option<u128>,
    /// Overrides the cycle-length bound ⌈2n/3⌉ in condition checks.
    #[arg(long)]
    max_cycle_len: Option<usize>,
    /// Float tolerance for spectral comparisons.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

impl Common {
    fn subset_mode(&self) -> SubsetMode {
        match self.mode {
            Mode::Exhaustive => SubsetMode::Exhaustive,
            Mode::Sampled => SubsetMode::Sampled { seed: self.seed, trials: self.trials },
        }
    }
    fn budget_or(&self, default: u128) -> u128 {
        self.budget.unwrap_or(default)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Complete,
    Path,
    Cycle,
    CompleteBipartite,
    Icosahedron,
    Petersen,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a standard graph as a complex file.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// Vertex count (first side for complete-bipartite).
        #[arg(long, default_value_t = 3)]
        n: u32,
        /// Second side for complete-bipartite.
        #[arg(long, default_value_t = 3)]
        m: u32,
        /// Record the bipartition as a partite labeling.
        #[arg(long)]
        partite: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Check the weight axioms of a complex.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Spectrum, intervals and Cheeger constants.
    Spectral {
        #[command(flatten)]
        common: Common,
    },
    /// Cheeger constants and the spectral Cheeger inequalities.
    Cheeger {
        #[command(flatten)]
        common: Common,
    },
    /// Expander mixing bounds over vertex-subset pairs.
    Eml {
        /// Use the partite bounds (needs a partite labeling).
        #[arg(long)]
        partite: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Hypothesis checks and cohomology of a quotient sheaf.
    Sheaf {
        #[command(flatten)]
        sheaf: SheafArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Coboundary expansion cb₀ with the theorem's lower bound.
    Cb0 {
        #[command(flatten)]
        sheaf: SheafArgs,
        #[command(flatten)]
        common: Common,
    },
    /// (ε, δ)-cosystolic check of a quotient sheaf with ∅ removed.
    Cosys {
        #[command(flatten)]
        sheaf: SheafArgs,
        /// ε as p/q; defaults to 0.
        #[arg(long)]
        epsilon: Option<String>,
        /// δ as p/q; defaults to 1 − max vertex weight.
        #[arg(long)]
        delta: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Spherical buildings: the complex A_n(F_q) or the threshold table.
    Building {
        /// Building type; only A is generated.
        #[arg(long = "type", default_value = "A")]
        kind: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// `example77` prints the threshold table instead.
        #[arg(long)]
        table: Option<String>,
        /// Where to write the bounds report (stdout when absent).
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// The introduction's code on a regular graph.
    Ltc {
        /// Graph file; same as --in.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        m: usize,
        /// Report file; same as --out.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Minimize over all of Σ^{X(0)} instead of Π F(v).
        #[arg(long)]
        alphabet_words: bool,
        #[command(flatten)]
        common: Common,
    },
    /// The five-row threshold table as CSV.
    Table77 {
        #[command(flatten)]
        common: Common,
    },
    /// The acceptance battery.
    Suite {
        /// Acceptance scale (the default run is ten times longer on seeded parts).
        #[arg(long)]
        quick: bool,
        /// Run a single criterion.
        #[arg(long)]
        only: Option<u8>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
struct SheafArgs {
    /// Sheaf spec (JSON); the constant augmented sheaf over --group otherwise.
    #[arg(long, value_name = "FILE")]
    sheaf: Option<PathBuf>,
    /// `gf:p:k` or `cyclic:m1,m2,...`, used without --sheaf.
    #[arg(long, default_value = "gf:2:1")]
    group: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("sheafex: {e}");
            ExitCode::from(2)
        }
    }
}
