//! One run of a clustering method, shared by `solve` and `bench`.

use anyhow::Result;
use ssac_core::exact::{opt_min_disagree_with, ExactLimits};
use ssac_core::faulty_cluster::{
    faulty_max_agree_query_bound, faulty_min_disagree_query_bound, faulty_query_max_agree, faulty_query_min_disagree,
    RecoveryConfig,
};
use ssac_core::query_cluster::{
    max_agree_query_bound, min_disagree_query_bound, query_max_agree, query_min_disagree, AlgorithmParams,
};
use ssac_core::{Clustering, EdgeLabeling, FaultyOracle, PerfectOracle, QueryLedger};

use crate::args::{AlgoArgs, Method};
use crate::error::usage;

pub struct Outcome {
    pub clustering: Clustering,
    pub cost: u64,
    pub query_count: u64,
}

/// Rejects flag combinations that do not fit the method.
pub fn check_flags(algo: &AlgoArgs, has_truth: bool) -> Result<()> {
    match (algo.method.is_faulty(), algo.q) {
        (false, Some(_)) => return Err(usage(format!("--q applies only to faulty methods, not {}", algo.method.name()))),
        (true, None) => return Err(usage(format!("{} needs --q", algo.method.name()))),
        (true, Some(q)) if !(0.0..0.5).contains(&q) => {
            return Err(usage(format!("--q must lie in [0, 1/2), got {q}")))
        }
        _ => {}
    }
    if algo.method != Method::Exact && !has_truth {
        return Err(usage(format!("{} queries an oracle and needs a ground-truth clustering", algo.method.name())));
    }
    Ok(())
}

pub fn params(algo: &AlgoArgs, k: usize, seed: u64) -> AlgorithmParams {
    let mut p = AlgorithmParams::new(k, algo.epsilon, seed);
    p.delta = algo.delta;
    p.sample_scale = algo.sample_scale;
    p.literal_step7 = algo.literal_step7;
    p
}

pub fn query_bound(algo: &AlgoArgs, n: usize, k: usize) -> Option<u64> {
    let (e, d, s) = (algo.epsilon, algo.delta, algo.sample_scale);
    Some(match algo.method {
        Method::Exact => return None,
        Method::QueryMaxAgree => max_agree_query_bound(n, k, e, d, s),
        Method::QueryMinDisagree => min_disagree_query_bound(n, k, e, d, s),
        Method::FaultyMaxAgree => faulty_max_agree_query_bound(n, k, e, d, s),
        Method::FaultyMinDisagree => faulty_min_disagree_query_bound(n, k, e, d, s),
    })
}

/// Cost under the method's objective.
pub fn objective_cost(algo: &AlgoArgs, labeling: &EdgeLabeling, c: &Clustering) -> Result<u64> {
    Ok(if algo.method.maximises() { labeling.agreement_cost(c)? } else { labeling.disagreement_cost(c)? })
}

pub fn run_once(labeling: &EdgeLabeling, truth: Option<&Clustering>, algo: &AlgoArgs, k: usize, seed: u64) -> Result<Outcome> {
    let p = params(algo, k, seed);
    let mut ledger = QueryLedger::new();
    let truth = || truth.cloned().ok_or_else(|| usage("a ground-truth clustering is required"));
    let clustering = match algo.method {
        Method::Exact => opt_min_disagree_with(labeling, k, &ExactLimits::default())?.1,
        Method::QueryMaxAgree => query_max_agree(labeling, &p, &PerfectOracle::new(truth()?), &mut ledger)?,
        Method::QueryMinDisagree => query_min_disagree(labeling, &p, &PerfectOracle::new(truth()?), &mut ledger)?,
        Method::FaultyMaxAgree | Method::FaultyMinDisagree => {
            let oracle = FaultyOracle::new(truth()?, algo.q.unwrap_or(0.0), seed)?;
            let config = RecoveryConfig::new(algo.recovery.into(), seed);
            if algo.method == Method::FaultyMaxAgree {
                faulty_query_max_agree(labeling, &p, &oracle, &mut ledger, &config)?
            } else {
                faulty_query_min_disagree(labeling, &p, &oracle, &mut ledger, &config)?
            }
        }
    };
    Ok(Outcome { cost: objective_cost(algo, labeling, &clustering)?, clustering, query_count: ledger.count() })
}

/// The exact optimum under the method's objective, with at most `k` clusters.
pub fn exact_optimum(algo: &AlgoArgs, labeling: &EdgeLabeling, k: usize) -> Result<u64> {
    let limits = ExactLimits::default();
    if labeling.n() > limits.max_partition_vertices {
        return Err(usage(format!(
            "--compare-exact needs n <= {}, the instance has {}",
            limits.max_partition_vertices,
            labeling.n()
        )));
    }
    let (dis, _) = opt_min_disagree_with(labeling, k, &limits)?;
    Ok(if algo.method.maximises() { labeling.num_pairs() - dis } else { dis })
}

/// `(ratio, success)` of a cost against the optimum: within `1 + eps` for
/// MinDisAgree, within `eps n^2 / 2` additively for MaxAgree.
pub fn judge(algo: &AlgoArgs, n: usize, cost: u64, opt: u64) -> (Option<f64>, bool) {
    if algo.method.maximises() {
        let ratio = if opt == 0 { Some(1.0) } else { Some(cost as f64 / opt as f64) };
        let slack = algo.epsilon * (n * n) as f64 / 2.0;
        (ratio, cost as f64 >= opt as f64 - slack - 1e-9)
    } else {
        let ratio = match (cost, opt) {
            (0, 0) => Some(1.0),
            (_, 0) => None,
            _ => Some(cost as f64 / opt as f64),
        };
        let eps = if algo.method == Method::Exact { 0.0 } else { algo.epsilon };
        (ratio, cost as f64 <= (1.0 + eps) * opt as f64 + 1e-9)
    }
}
