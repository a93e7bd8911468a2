use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

/// Tool name and version, stamped on every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// The command line after the program name.
    pub args: Vec<String>,
}

impl Provenance {
    pub fn new(command: &str) -> Self {
        Self {
            tool: "ssac".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            args: std::env::args().skip(1).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct InstanceInfo {
    pub n: usize,
    pub k: usize,
    pub positives: usize,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Params {
    pub epsilon: f64,
    pub delta: f64,
    pub q: Option<f64>,
    pub seed: u64,
    /// Seed of every trial, in order.
    pub trial_seeds: Vec<u64>,
    pub sample_scale: f64,
    pub recovery: Option<String>,
    pub literal_step7: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    Agreements,
    Disagreements,
}

/// Outcome of one trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Trial {
    pub seed: u64,
    pub cost: u64,
    pub clusters: usize,
    /// Ledger total of the run.
    pub query_count: u64,
    /// Present only when the exact optimum was computed.
    pub approximation_ratio: Option<f64>,
    pub success: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct TrialStats {
    pub trials: usize,
    pub mean_cost: f64,
    pub mean_query_count: f64,
    pub max_query_count: u64,
    /// Fraction of trials meeting the method's guarantee against the exact
    /// optimum; present only with `--compare-exact`.
    pub success_rate: Option<f64>,
}

/// Report of one `solve` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct RunReport {
    pub provenance: Provenance,
    pub method: String,
    pub instance: InstanceInfo,
    pub params: Params,
    pub objective: Objective,
    /// Cost of the first trial.
    pub cost: u64,
    /// Ledger total of the first trial.
    pub query_count: u64,
    /// Closed-form query bound of the method at these parameters.
    pub query_bound: Option<u64>,
    pub exact_optimum: Option<u64>,
    pub approximation_ratio: Option<f64>,
    pub stats: TrialStats,
    pub trials: Vec<Trial>,
    /// Only recorded with `--timing`.
    pub wall_time_ms: Option<f64>,
}

/// The JSON schema of [`RunReport`], as shipped in `schema/run_report.schema.json`.
pub fn run_report_schema() -> String {
    let schema = schemars::schema_for!(RunReport);
    serde_json::to_string_pretty(&schema).expect("schema serialises") + "\n"
}
