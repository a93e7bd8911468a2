//! Approximation algorithms for MaxAgree[k] and MinDisAgree[k] with a
//! perfect same-cluster oracle.
//!
//! Sample sizes are the asymptotic formulas with explicit constants, scaled by
//! [`AlgorithmParams::sample_scale`] and clamped to the vertices available.
//! At desk scale the clamp is usually active and samples cover everything.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Clustering, EdgeLabeling};
use crate::oracle::{partition_sample, QueryLedger, SameClusterOracle, SamplePartition, SubsetOracle};
use crate::rng;

/// The constant `c1` of the MinDisAgree recursion.
pub const C1: f64 = 1.0 / 20.0;

const TAG_MAX_AGREE: u64 = 1;
const TAG_MIN_SAMPLE: u64 = 2;
const TAG_MIN_MAX: u64 = 3;
const TAG_RECURSE: u64 = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmParams {
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Multiplier on every sample-size formula.
    pub sample_scale: f64,
    pub seed: u64,
    /// Classify clusters as large by their sample part instead of the
    /// assembled cluster.
    pub literal_step7: bool,
}

impl AlgorithmParams {
    pub fn new(k: usize, epsilon: f64, seed: u64) -> Self {
        Self { k, epsilon, delta: 0.1, sample_scale: 1.0, seed, literal_step7: false }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 0.5) {
            return Err(Error::InvalidParams(format!("epsilon must lie in (0, 1/2], got {}", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParams(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if !(self.sample_scale > 0.0 && self.sample_scale.is_finite()) {
            return Err(Error::InvalidParams(format!("sample_scale must be positive, got {}", self.sample_scale)));
        }
        Ok(())
    }
}

/// Number of parts `m = ceil(4 / eps)`, at most `n`.
pub fn num_parts(n: usize, epsilon: f64) -> usize {
    ((4.0 / epsilon).ceil() as usize).clamp(1, n.max(1))
}

/// Per-part sample size `ceil(scale * (2 / eps^2) * ln(k m / delta))` for MaxAgree.
pub fn max_agree_sample_size(n: usize, k: usize, epsilon: f64, delta: f64, scale: f64) -> usize {
    let m = num_parts(n, epsilon) as f64;
    ceil_size(scale * 2.0 / (epsilon * epsilon) * (k as f64 * m / delta).ln())
}

/// MinDisAgree sample size `ceil(scale * 5 ln n / beta^2)` with `beta = c1 alpha / (16 k^2)`.
pub fn min_disagree_sample_size(n: usize, k: usize, alpha: f64, scale: f64) -> usize {
    let beta = C1 * alpha / (16.0 * (k * k) as f64);
    ceil_size(scale * 5.0 * (n.max(2) as f64).ln() / (beta * beta))
}

/// Accuracy handed to MaxAgree inside MinDisAgree: `alpha^2 c1^2 / (32 k^4)`.
pub fn inner_max_agree_accuracy(k: usize, alpha: f64) -> f64 {
    alpha * alpha * C1 * C1 / (32.0 * (k as f64).powi(4))
}

fn ceil_size(x: f64) -> usize {
    if x.is_finite() && x < usize::MAX as f64 {
        x.ceil().max(1.0) as usize
    } else {
        usize::MAX
    }
}

/// Closed-form upper bound on the queries of [`query_max_agree`].
pub fn max_agree_query_bound(n: usize, k: usize, epsilon: f64, delta: f64, scale: f64) -> u64 {
    if k <= 1 || n <= 1 {
        return 0;
    }
    let m = num_parts(n, epsilon);
    let r = max_agree_sample_size(n, k, epsilon, delta, scale);
    (k * n.min(m.saturating_mul(r))) as u64
}

/// Closed-form upper bound on the queries of [`query_min_disagree`] at top-level
/// accuracy `epsilon` (so `alpha = epsilon / 4`).
pub fn min_disagree_query_bound(n: usize, k: usize, epsilon: f64, delta: f64, scale: f64) -> u64 {
    min_disagree_bound_alpha(n, k, epsilon / 4.0, delta, scale)
}

fn min_disagree_bound_alpha(n: usize, k: usize, alpha: f64, delta: f64, scale: f64) -> u64 {
    if k <= 1 || n <= 1 {
        return 0;
    }
    let acc = inner_max_agree_accuracy(k, alpha);
    let sample = min_disagree_sample_size(n, k, alpha, scale).min(n);
    max_agree_query_bound(n, k, acc, delta, scale)
        + (k * sample) as u64
        + min_disagree_bound_alpha(n, k - 1, alpha, delta, scale)
}

/// `beta_j(v)`: agreements between `v` and the sample if `v` joins group `j`.
pub(crate) fn best_group(sizes: &[usize], positives: &[usize]) -> usize {
    let total_neg: usize = sizes.iter().zip(positives).map(|(s, p)| s - p).sum();
    let mut best = 0;
    let mut best_score = 0;
    for j in 0..sizes.len() {
        let score = positives[j] + total_neg - (sizes[j] - positives[j]);
        if j == 0 || score > best_score {
            best = j;
            best_score = score;
        }
    }
    best
}

/// The part index maximising `beta_j(v) = |N+(v) ∩ S_j| + sum_{l != j} |N-(v) ∩ S_l|`,
/// lowest index on ties.
pub fn greedy_assign(v: usize, parts: &SamplePartition, labeling: &EdgeLabeling) -> Result<usize> {
    if parts.is_empty() || parts.groups.iter().any(Vec::is_empty) {
        return Err(Error::Precondition("greedy_assign needs non-empty parts".into()));
    }
    if parts.groups.iter().flatten().any(|&u| u == v) {
        return Err(Error::Precondition(format!("vertex {v} already belongs to a part")));
    }
    let sizes: Vec<usize> = parts.groups.iter().map(Vec::len).collect();
    let positives: Vec<usize> =
        parts.groups.iter().map(|g| g.iter().filter(|&&u| labeling.is_positive(u, v)).count()).collect();
    Ok(best_group(&sizes, &positives))
}

/// A random split of `0..n` into `m` parts whose sizes differ by at most one.
pub(crate) fn random_parts(n: usize, m: usize, rng: &mut rng::Rng) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    (0..m).map(|i| perm[i * n / m..(i + 1) * n / m].to_vec()).collect()
}

/// `size` draws with replacement from the vertices with `part_of[u] != excluded`,
/// deduplicated and sorted. `None` when the draw would cover that whole set.
pub(crate) fn draw_excluding(
    part_of: &[usize],
    excluded: usize,
    available: usize,
    size: usize,
    rng: &mut rng::Rng,
) -> Option<Vec<usize>> {
    if size >= available {
        return None;
    }
    let n = part_of.len();
    let mut sample = Vec::with_capacity(size);
    while sample.len() < size {
        let u = rng.gen_range(0..n);
        if part_of[u] != excluded {
            sample.push(u);
        }
    }
    sample.sort_unstable();
    sample.dedup();
    Some(sample)
}

/// QueryMaxAgree: a clustering with at most `k` clusters whose agreement is
/// close to optimal, using `O(k/eps^3 log(k/(eps^2 delta)))` queries.
pub fn query_max_agree<O: SameClusterOracle + ?Sized>(
    labeling: &EdgeLabeling,
    params: &AlgorithmParams,
    oracle: &O,
    ledger: &mut QueryLedger,
) -> Result<Clustering> {
    params.validate()?;
    max_agree_inner(labeling, params.k, params.epsilon, params, rng::derive(params.seed, TAG_MAX_AGREE), oracle, ledger)
}

fn check_oracle<O: SameClusterOracle + ?Sized>(labeling: &EdgeLabeling, oracle: &O) -> Result<()> {
    if oracle.num_vertices() != labeling.n() {
        return Err(Error::SizeMismatch { expected: labeling.n(), got: oracle.num_vertices() });
    }
    Ok(())
}

fn max_agree_inner<O: SameClusterOracle + ?Sized>(
    labeling: &EdgeLabeling,
    k: usize,
    epsilon: f64,
    params: &AlgorithmParams,
    seed: u64,
    oracle: &O,
    ledger: &mut QueryLedger,
) -> Result<Clustering> {
    check_oracle(labeling, oracle)?;
    let n = labeling.n();
    if k == 1 || n <= 1 {
        return Ok(Clustering::single(n));
    }
    let mut rng = rng::seeded(seed);
    let m = num_parts(n, epsilon);
    let r = max_agree_sample_size(n, k, epsilon, params.delta, params.sample_scale);
    let parts = random_parts(n, m, &mut rng);
    let mut part_of = vec![0; n];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            part_of[v] = i;
        }
    }

    // None stands for the whole complement V \ V^i
    let samples: Vec<Option<Vec<usize>>> =
        parts.iter().enumerate().map(|(i, p)| draw_excluding(&part_of, i, n - p.len(), r, &mut rng)).collect();

    // the union of all samples is partitioned once, so group j names the same
    // oracle cluster in every iteration
    let mut in_union = vec![false; n];
    for (i, s) in samples.iter().enumerate() {
        match s {
            Some(s) => s.iter().for_each(|&u| in_union[u] = true),
            None => (0..n).filter(|&u| part_of[u] != i).for_each(|u| in_union[u] = true),
        }
    }
    let union: Vec<usize> = (0..n).filter(|&u| in_union[u]).collect();
    let groups = partition_sample(&union, oracle, k, ledger)?;
    const NONE: usize = usize::MAX;
    let mut group_of = vec![NONE; n];
    for (j, g) in groups.groups.iter().enumerate() {
        for &u in g {
            group_of[u] = j;
        }
    }
    let g = groups.len();

    let mut labels = vec![0; n];
    let mut in_sample = vec![false; n];
    for (i, part) in parts.iter().enumerate() {
        let mut sizes = vec![0; g];
        match &samples[i] {
            Some(s) => {
                for &u in s {
                    in_sample[u] = true;
                    sizes[group_of[u]] += 1;
                }
            }
            None => {
                for (j, grp) in groups.groups.iter().enumerate() {
                    sizes[j] = grp.iter().filter(|&&u| part_of[u] != i).count();
                }
            }
        }
        let member = |u: usize| match &samples[i] {
            Some(_) => in_sample[u],
            None => part_of[u] != i && group_of[u] != NONE,
        };
        let mut positives = vec![0; g];
        for &v in part {
            positives.iter_mut().for_each(|p| *p = 0);
            for &u in labeling.positive_neighbors(v) {
                if member(u) {
                    positives[group_of[u]] += 1;
                }
            }
            labels[v] = best_group(&sizes, &positives);
        }
        if let Some(s) = &samples[i] {
            s.iter().for_each(|&u| in_sample[u] = false);
        }
    }

    let assembled = Clustering::from_labels(&labels);
    let single = Clustering::single(n);
    if labeling.agreement_cost(&single)? > labeling.agreement_cost(&assembled)? {
        Ok(single)
    } else {
        Ok(assembled)
    }
}

/// QueryMinDisAgree: a clustering with at most `k` clusters whose
/// disagreement is within `1 + eps` of optimal with high probability.
pub fn query_min_disagree<O: SameClusterOracle>(
    labeling: &EdgeLabeling,
    params: &AlgorithmParams,
    oracle: &O,
    ledger: &mut QueryLedger,
) -> Result<Clustering> {
    params.validate()?;
    check_oracle(labeling, oracle)?;
    min_disagree_rec(labeling, params.k, params.epsilon / 4.0, params, params.seed, oracle, ledger)
}

/// Combines an outer clustering on the large clusters with a clustering of the
/// remaining vertices `w`.
pub(crate) fn splice(n: usize, large_labels: &[usize], w: &[usize], inner: &Clustering) -> Clustering {
    let offset = large_labels.iter().copied().filter(|&l| l != usize::MAX).max().map_or(0, |l| l + 1);
    let mut labels = large_labels.to_vec();
    for (i, &v) in w.iter().enumerate() {
        labels[v] = offset + inner.cluster_of(i);
    }
    debug_assert_eq!(labels.len(), n);
    Clustering::from_labels(&labels)
}

/// Steps (5)-(11) shared with the faulty variant: given the sample partition,
/// assemble clusters, split large from small, recurse and pick the better.
pub(crate) struct Assembly {
    pub step6: Clustering,
    pub large_labels: Vec<usize>,
    pub small: Vec<usize>,
    pub num_small: usize,
    pub num_large: usize,
}

pub(crate) fn assemble(labeling: &EdgeLabeling, k: usize, groups: &SamplePartition, literal_step7: bool) -> Assembly {
    let n = labeling.n();
    const NONE: usize = usize::MAX;
    let mut group_of = vec![NONE; n];
    for (j, g) in groups.groups.iter().enumerate() {
        for &u in g {
            group_of[u] = j;
        }
    }
    let g = groups.len();
    let sizes: Vec<usize> = groups.groups.iter().map(Vec::len).collect();
    let mut labels = group_of.clone();
    let mut positives = vec![0; g];
    for v in 0..n {
        if group_of[v] != NONE {
            continue;
        }
        positives.iter_mut().for_each(|p| *p = 0);
        for &u in labeling.positive_neighbors(v) {
            if group_of[u] != NONE {
                positives[group_of[u]] += 1;
            }
        }
        labels[v] = best_group(&sizes, &positives);
    }
    let mut assembled = vec![0usize; g];
    for &l in &labels {
        assembled[l] += 1;
    }
    let threshold = n as f64 / (2.0 * k as f64);
    let is_large: Vec<bool> = (0..g)
        .map(|j| if literal_step7 { sizes[j] as f64 >= threshold } else { assembled[j] as f64 >= threshold })
        .collect();
    let num_large = is_large.iter().filter(|&&b| b).count();
    let num_small = (0..g).filter(|&j| !is_large[j] && assembled[j] > 0).count();
    let small: Vec<usize> = (0..n).filter(|&v| !is_large[labels[v]]).collect();
    let large_labels = labels.iter().map(|&l| if is_large[l] { l } else { NONE }).collect();
    Assembly { step6: Clustering::from_labels(&labels), large_labels, small, num_small, num_large }
}

pub(crate) fn better_min(labeling: &EdgeLabeling, preferred: Clustering, other: Clustering) -> Result<Clustering> {
    if labeling.disagreement_cost(&other)? < labeling.disagreement_cost(&preferred)? {
        Ok(other)
    } else {
        Ok(preferred)
    }
}

fn draw_min_sample(n: usize, size: usize, rng: &mut rng::Rng) -> Vec<usize> {
    if size >= n {
        return (0..n).collect();
    }
    let mut s: Vec<usize> = (0..size).map(|_| rng.gen_range(0..n)).collect();
    s.sort_unstable();
    s.dedup();
    s
}

#[allow(clippy::too_many_arguments)]
fn min_disagree_rec(
    labeling: &EdgeLabeling,
    k: usize,
    alpha: f64,
    params: &AlgorithmParams,
    seed: u64,
    oracle: &dyn SameClusterOracle,
    ledger: &mut QueryLedger,
) -> Result<Clustering> {
    let n = labeling.n();
    if k == 1 || n <= 1 {
        return Ok(Clustering::single(n));
    }
    let acc = inner_max_agree_accuracy(k, alpha);
    let clus_max = max_agree_inner(labeling, k, acc, params, rng::derive(seed, TAG_MIN_MAX), oracle, ledger)?;

    let mut rng = rng::seeded(rng::derive(seed, TAG_MIN_SAMPLE));
    let size = min_disagree_sample_size(n, k, alpha, params.sample_scale);
    let sample = draw_min_sample(n, size, &mut rng);
    let groups = partition_sample(&sample, oracle, k, ledger)?;
    let asm = assemble(labeling, k, &groups, params.literal_step7);

    if asm.num_large == 0 {
        return better_min(labeling, asm.step6, clus_max);
    }
    let clus_min = if asm.small.is_empty() {
        asm.step6
    } else {
        let sub = labeling.induced(&asm.small);
        let sub_oracle = SubsetOracle::new(oracle, &asm.small);
        let s = asm.num_small.clamp(1, k - 1);
        let inner = min_disagree_rec(&sub, s, alpha, params, rng::derive(seed, TAG_RECURSE), &sub_oracle, ledger)?;
        splice(n, &asm.large_labels, &asm.small, &inner)
    };
    better_min(labeling, clus_min, clus_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{planted_instance, PlantedSpec};
    use crate::oracle::PerfectOracle;

    #[test]
    fn greedy_assign_examples() {
        let l = EdgeLabeling::new(5, [(4, 0), (4, 1)]).unwrap();
        let parts = SamplePartition::new(vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(greedy_assign(4, &parts, &l).unwrap(), 0);
        let tie = EdgeLabeling::new(5, [(4, 0), (4, 2)]).unwrap();
        assert_eq!(greedy_assign(4, &parts, &tie).unwrap(), 0);
        assert!(greedy_assign(0, &parts, &l).is_err());
    }

    #[test]
    fn parts_and_sizes() {
        assert_eq!(num_parts(1000, 0.5), 8);
        assert_eq!(num_parts(5, 0.5), 5);
        let mut r = rng::seeded(1);
        let parts = random_parts(23, 8, &mut r);
        let mut all: Vec<usize> = parts.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..23).collect::<Vec<_>>());
        assert!(parts.iter().all(|p| p.len() == 2 || p.len() == 3));
    }

    #[test]
    fn k1_is_single_cluster_without_queries() {
        let (l, truth) = planted_instance(&PlantedSpec::new(30, 1, 0.2, 3)).unwrap();
        let oracle = PerfectOracle::new(truth);
        let mut ledger = QueryLedger::new();
        let p = AlgorithmParams::new(1, 0.5, 0);
        assert_eq!(query_min_disagree(&l, &p, &oracle, &mut ledger).unwrap().k(), 1);
        let c = query_max_agree(&l, &p, &oracle, &mut ledger).unwrap();
        assert_eq!(l.agreement_cost(&c).unwrap(), l.num_positive() as u64);
        assert_eq!(ledger.count(), 0);
    }

    #[test]
    fn noiseless_planted_is_recovered() {
        let (l, truth) = planted_instance(&PlantedSpec::new(60, 2, 0.0, 5)).unwrap();
        let oracle = PerfectOracle::new(truth.clone());
        let mut ledger = QueryLedger::new();
        let c = query_max_agree(&l, &AlgorithmParams::new(2, 0.4, 9), &oracle, &mut ledger).unwrap();
        assert_eq!(l.agreement_cost(&c).unwrap(), l.num_pairs());

        let (l, truth) = planted_instance(&PlantedSpec::new(80, 3, 0.0, 6)).unwrap();
        let oracle = PerfectOracle::new(truth.clone());
        let mut ledger = QueryLedger::new();
        let p = AlgorithmParams::new(3, 0.5, 2);
        let c = query_min_disagree(&l, &p, &oracle, &mut ledger).unwrap();
        assert_eq!(l.disagreement_cost(&c).unwrap(), 0);
        assert_eq!(c, truth);
        assert!(ledger.count() <= min_disagree_query_bound(80, 3, 0.5, p.delta, 1.0));
    }

    #[test]
    fn bound_is_monotone_in_k() {
        let b: Vec<u64> = (1..=6).map(|k| min_disagree_query_bound(2000, k, 0.5, 0.1, 1.0)).collect();
        assert_eq!(b[0], 0);
        assert!(b.windows(2).all(|w| w[0] < w[1]), "{b:?}");
    }

    #[test]
    fn rejects_bad_params() {
        let l = EdgeLabeling::all_negative(4);
        let oracle = PerfectOracle::new(Clustering::singletons(4));
        let mut ledger = QueryLedger::new();
        for eps in [0.0, 0.6, f64::NAN] {
            let p = AlgorithmParams::new(2, eps, 0);
            assert!(matches!(query_min_disagree(&l, &p, &oracle, &mut ledger), Err(Error::InvalidParams(_))));
        }
        let wrong = PerfectOracle::new(Clustering::singletons(5));
        assert!(query_max_agree(&l, &AlgorithmParams::new(2, 0.5, 0), &wrong, &mut ledger).is_err());
    }
}
