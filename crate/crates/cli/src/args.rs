use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ssac_core::faulty_cluster::RecoveryMethod;
use ssac_core::reductions::Stage;

#[derive(Parser, Debug)]
#[command(name = "ssac", version, about = "Correlation clustering with same-cluster queries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a planted instance or a random formula.
    Generate(GenerateArgs),
    /// Run a clustering method on an instance and print a JSON report.
    Solve(SolveArgs),
    /// Run a contiguous part of the reduction chain.
    Reduce(ReduceArgs),
    /// Check the reduction properties on a chain of stage files.
    Verify(VerifyArgs),
    /// Sweep a parameter grid and tabulate query counts and costs.
    Bench(BenchArgs),
    /// Print the JSON schema of `solve` reports.
    Schema,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory (generate, reduce) or file (other commands).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Suppress the report on stdout.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenerateKind {
    Planted,
    E3sat,
    Nae6,
    Nae3,
    Monotone,
    Hypergraph,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = GenerateKind::Planted)]
    pub kind: GenerateKind,
    /// Vertices (planted, hypergraph) or variables (formulas).
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Every planted cluster gets at least this fraction of the vertices.
    #[arg(long, default_value_t = 0.0)]
    pub min_fraction: f64,
    /// Clauses or hyperedges.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// File name stem of the outputs.
    #[arg(long, default_value = "instance")]
    pub name: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    QueryMaxAgree,
    QueryMinDisagree,
    FaultyMaxAgree,
    FaultyMinDisagree,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::QueryMaxAgree => "query-max-agree",
            Method::QueryMinDisagree => "query-min-disagree",
            Method::FaultyMaxAgree => "faulty-max-agree",
            Method::FaultyMinDisagree => "faulty-min-disagree",
        }
    }

    pub fn is_faulty(self) -> bool {
        matches!(self, Method::FaultyMaxAgree | Method::FaultyMinDisagree)
    }

    pub fn maximises(self) -> bool {
        matches!(self, Method::QueryMaxAgree | Method::FaultyMaxAgree)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recovery {
    ExactMl,
    LocalSearch,
}

impl Recovery {
    pub fn name(self) -> &'static str {
        match self {
            Recovery::ExactMl => "exact-ml",
            Recovery::LocalSearch => "local-search",
        }
    }
}

impl From<Recovery> for RecoveryMethod {
    fn from(r: Recovery) -> Self {
        match r {
            Recovery::ExactMl => RecoveryMethod::ExactMl,
            Recovery::LocalSearch => RecoveryMethod::LocalSearch,
        }
    }
}

/// Algorithm flags shared by `solve` and `bench`.
#[derive(Args, Debug, Clone)]
pub struct AlgoArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sample_scale: f64,
    /// Oracle error probability (faulty methods only).
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, value_enum, default_value_t = Recovery::LocalSearch)]
    pub recovery: Recovery,
    /// Use the literal sample-restricted Large/Small split of the recursion.
    #[arg(long)]
    pub literal_step7: bool,
    #[arg(long)]
    pub compare_exact: bool,
    /// Record wall-clock time (makes the report non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub algo: AlgoArgs,
    #[arg(long)]
    pub instance: PathBuf,
    /// Ground-truth clustering answering the oracle's queries.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Write the first trial's clustering here.
    #[arg(long)]
    pub clustering_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub from: Stage,
    #[arg(long)]
    pub to: Stage,
    #[arg(long, default_value = "chain")]
    pub name: String,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Stage files in chain order; stages are read from the extensions.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Reduce the single input file to this stage first, then verify.
    #[arg(long)]
    pub chain_to: Option<Stage>,
    #[arg(long, default_value_t = 8)]
    pub max_violated: usize,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub algo: AlgoArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub ns: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub ks: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub epsilons: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub qs: Vec<f64>,
    /// Seeds per grid cell.
    #[arg(long, default_value_t = 3)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0.0)]
    pub min_fraction: f64,
    /// Largest number of runs (cells times seeds) the sweep may perform.
    #[arg(long, default_value_t = 1000)]
    pub budget: usize,
}
