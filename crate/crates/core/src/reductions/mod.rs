//! The reduction chain E3-SAT → NAE6-SAT → NAE3-SAT → monotone NAE3-SAT →
//! 3-uniform hypergraph 2-colouring → correlation clustering, with traces and
//! brute-force verifiers.
//!
//! Fresh variables are numbered deterministically and named in each stage's
//! trace, so assignments can be mapped forward ([`extend_assignment`]) and
//! pulled back ([`pull_back`]) mechanically.

pub mod corpus;
mod gadget;
mod sat_stages;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{CnfFormula, Hypergraph3, NaeFormula};
use crate::instance::EdgeLabeling;

pub use gadget::{coloring_to_clustering, hypergraph_to_correlation, pull_back_coloring};
pub use sat_stages::{e3sat_to_nae6sat, monotone_to_hypergraph, nae3sat_to_monotone, nae6sat_to_nae3sat};
pub use verify::{verify_reduction_gap, CheckStatus, GapCheck, GapReport, PropertyCheck, StageReport, StageValue, VerifyBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    E3sat,
    Nae6sat,
    Nae3sat,
    Monotone,
    Hypergraph,
    Correlation,
}

impl Stage {
    pub const ALL: [Stage; 6] =
        [Stage::E3sat, Stage::Nae6sat, Stage::Nae3sat, Stage::Monotone, Stage::Hypergraph, Stage::Correlation];

    pub fn name(self) -> &'static str {
        match self {
            Stage::E3sat => "e3sat",
            Stage::Nae6sat => "nae6sat",
            Stage::Nae3sat => "nae3sat",
            Stage::Monotone => "monotone",
            Stage::Hypergraph => "hypergraph",
            Stage::Correlation => "correlation",
        }
    }

    pub fn next(self) -> Option<Stage> {
        let i = Stage::ALL.iter().position(|&s| s == self)?;
        Stage::ALL.get(i + 1).copied()
    }

    /// Conventional file extension of the stage's artifact.
    pub fn extension(self) -> &'static str {
        match self {
            Stage::E3sat => "cnf",
            Stage::Nae6sat => "nae6",
            Stage::Nae3sat => "nae3",
            Stage::Monotone => "mnae3",
            Stage::Hypergraph => "h3",
            Stage::Correlation => "cc",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown stage `{s}`")))
    }
}

/// The object a stage works on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Artifact {
    E3sat(CnfFormula),
    Nae6sat(NaeFormula),
    Nae3sat(NaeFormula),
    Monotone(NaeFormula),
    Hypergraph(Hypergraph3),
    Correlation { labeling: EdgeLabeling, k: usize },
}

impl Artifact {
    pub fn stage(&self) -> Stage {
        match self {
            Artifact::E3sat(_) => Stage::E3sat,
            Artifact::Nae6sat(_) => Stage::Nae6sat,
            Artifact::Nae3sat(_) => Stage::Nae3sat,
            Artifact::Monotone(_) => Stage::Monotone,
            Artifact::Hypergraph(_) => Stage::Hypergraph,
            Artifact::Correlation { .. } => Stage::Correlation,
        }
    }

    pub fn sizes(&self) -> Sizes {
        match self {
            Artifact::E3sat(f) => Sizes::new(f.num_vars(), f.num_clauses(), f.max_occurrence()),
            Artifact::Nae6sat(f) | Artifact::Nae3sat(f) | Artifact::Monotone(f) => {
                Sizes::new(f.num_vars(), f.num_clauses(), f.max_occurrence())
            }
            Artifact::Hypergraph(h) => Sizes::new(h.num_vertices(), h.num_edges(), h.max_degree()),
            Artifact::Correlation { labeling, .. } => {
                let d = (0..labeling.n()).map(|v| labeling.positive_degree(v)).max().unwrap_or(0);
                Sizes::new(labeling.n(), labeling.num_positive(), d)
            }
        }
    }

    /// Parses an artifact of the given stage from its text format.
    pub fn parse(stage: Stage, text: &str) -> Result<Self> {
        let reader = text.as_bytes();
        Ok(match stage {
            Stage::E3sat => Artifact::E3sat(CnfFormula::from_dimacs(reader)?),
            Stage::Nae6sat => {
                let f = NaeFormula::from_dimacs(reader)?;
                if f.arity() != 6 {
                    return Err(Error::InvalidInput(format!("expected a nae6 formula, got arity {}", f.arity())));
                }
                Artifact::Nae6sat(f)
            }
            Stage::Nae3sat | Stage::Monotone => {
                let f = NaeFormula::from_dimacs(reader)?;
                if f.arity() != 3 {
                    return Err(Error::InvalidInput(format!("expected a nae3 formula, got arity {}", f.arity())));
                }
                if stage == Stage::Monotone {
                    Artifact::Monotone(f)
                } else {
                    Artifact::Nae3sat(f)
                }
            }
            Stage::Hypergraph => Artifact::Hypergraph(Hypergraph3::from_text(reader)?),
            Stage::Correlation => {
                let labeling = crate::instance::read_instance(reader)?;
                let k = labeling.n();
                Artifact::Correlation { labeling, k }
            }
        })
    }

    pub fn to_text(&self) -> Result<String> {
        Ok(match self {
            Artifact::E3sat(f) => f.to_dimacs(),
            Artifact::Nae6sat(f) | Artifact::Nae3sat(f) | Artifact::Monotone(f) => f.to_dimacs(),
            Artifact::Hypergraph(h) => h.to_text(),
            Artifact::Correlation { labeling, .. } => {
                let mut buf = Vec::new();
                crate::instance::write_instance(labeling, &mut buf)?;
                String::from_utf8(buf).expect("instance text is ASCII")
            }
        })
    }
}

/// Size bookkeeping of one artifact: variables (or vertices), clauses (or
/// edges, or positive pairs) and the largest occurrence (or degree).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sizes {
    pub n: usize,
    pub m: usize,
    pub d: usize,
}

impl Sizes {
    pub fn new(n: usize, m: usize, d: usize) -> Self {
        Self { n, m, d }
    }
}

/// One reduction step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTrace {
    pub from: Stage,
    pub to: Stage,
    pub input: Sizes,
    pub output: Sizes,
    /// Name of every output variable or vertex, by index.
    pub output_names: Vec<String>,
    /// Cluster bound attached to a correlation instance.
    pub cluster_bound: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub stages: Vec<StageTrace>,
}

impl ReductionTrace {
    /// Checks that every recorded size matches the artifact it describes.
    pub fn matches(&self, artifacts: &[Artifact]) -> bool {
        self.stages.len() + 1 == artifacts.len()
            && self.stages.iter().zip(artifacts.windows(2)).all(|(t, w)| {
                t.from == w[0].stage()
                    && t.to == w[1].stage()
                    && t.input == w[0].sizes()
                    && t.output == w[1].sizes()
                    && t.output_names.len() == w[1].sizes().n
            })
    }
}

/// Applies the single reduction step out of `artifact`'s stage.
pub fn reduce_once(artifact: &Artifact) -> Result<(Artifact, StageTrace)> {
    Ok(match artifact {
        Artifact::E3sat(f) => {
            let (g, t) = e3sat_to_nae6sat(f)?;
            (Artifact::Nae6sat(g), t)
        }
        Artifact::Nae6sat(f) => {
            let (g, t) = nae6sat_to_nae3sat(f)?;
            (Artifact::Nae3sat(g), t)
        }
        Artifact::Nae3sat(f) => {
            let (g, t) = nae3sat_to_monotone(f)?;
            (Artifact::Monotone(g), t)
        }
        Artifact::Monotone(f) => {
            let (h, t) = monotone_to_hypergraph(f)?;
            (Artifact::Hypergraph(h), t)
        }
        Artifact::Hypergraph(h) => {
            let (labeling, k, t) = hypergraph_to_correlation(h)?;
            (Artifact::Correlation { labeling, k }, t)
        }
        Artifact::Correlation { .. } => {
            return Err(Error::InvalidParams("correlation is the last stage of the chain".into()))
        }
    })
}

/// Runs the contiguous sub-chain from `start`'s stage to `to`, returning every
/// artifact (starting with a copy of `start`) and the trace.
pub fn run_chain(start: Artifact, to: Stage) -> Result<(Vec<Artifact>, ReductionTrace)> {
    if to < start.stage() {
        return Err(Error::InvalidParams(format!("cannot reduce from {} back to {to}", start.stage())));
    }
    let mut artifacts = vec![start];
    let mut trace = ReductionTrace::default();
    while artifacts.last().expect("non-empty").stage() != to {
        let (next, t) = reduce_once(artifacts.last().expect("non-empty"))?;
        artifacts.push(next);
        trace.stages.push(t);
    }
    Ok((artifacts, trace))
}

/// Maps a satisfying upstream assignment (or colouring) to the downstream
/// variables as in each lemma's completeness proof. Not defined for the
/// correlation stage; see [`coloring_to_clustering`].
pub fn extend_assignment(upstream: &Artifact, assignment: &[bool]) -> Result<Vec<bool>> {
    match upstream {
        Artifact::E3sat(f) => sat_stages::extend_e3(f, assignment),
        Artifact::Nae6sat(f) => sat_stages::extend_nae6(f, assignment),
        Artifact::Nae3sat(f) => sat_stages::extend_nae3(f, assignment),
        Artifact::Monotone(f) => sat_stages::check_len(f.num_vars(), assignment).map(|_| assignment.to_vec()),
        _ => Err(Error::InvalidParams(format!("no assignment map out of stage {}", upstream.stage()))),
    }
}

/// Maps a downstream assignment back to the upstream variables with the rule
/// each lemma's soundness proof uses.
pub fn pull_back(upstream: &Artifact, downstream_assignment: &[bool]) -> Result<Vec<bool>> {
    match upstream {
        Artifact::E3sat(f) => sat_stages::pull_e3(f, downstream_assignment),
        Artifact::Nae6sat(f) => sat_stages::pull_nae6(f, downstream_assignment),
        Artifact::Nae3sat(f) => sat_stages::pull_nae3(f, downstream_assignment),
        Artifact::Monotone(f) => {
            sat_stages::check_len(f.num_vars(), downstream_assignment).map(|_| downstream_assignment.to_vec())
        }
        _ => Err(Error::InvalidParams(format!("no assignment map into stage {}", upstream.stage()))),
    }
}
