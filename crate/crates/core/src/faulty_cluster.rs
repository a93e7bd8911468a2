//! MaxAgree / MinDisAgree with a faulty same-cluster oracle.
//!
//! Samples are no longer partitioned by representatives. Every pair inside a
//! sample is queried once, the answers form a small correlation instance, and
//! that instance is clustered ([`recover_sample_partition`]). Under flip
//! probability at most 1/3 and groups of at least `sqrt(|S|)` vertices this
//! recovers the true groups with high probability.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, ExactLimits};
use crate::instance::{Clustering, EdgeLabeling};
use crate::oracle::{QueryLedger, SameClusterOracle, SamplePartition, SubsetOracle};
use crate::query_cluster::{
    assemble, best_group, better_min, draw_excluding, inner_max_agree_accuracy, num_parts, random_parts, splice,
    AlgorithmParams,
};
use crate::rng;

const TAG_MAX_AGREE: u64 = 11;
const TAG_MIN_SAMPLE: u64 = 12;
const TAG_MIN_MAX: u64 = 13;
const TAG_RECURSE: u64 = 14;
const TAG_RECOVERY: u64 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecoveryMethod {
    /// Brute-force minimum-disagreement clustering of the answer instance.
    ExactMl,
    /// Greedy majority grouping followed by hill climbing.
    LocalSearch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryConfig {
    pub method: RecoveryMethod,
    /// Fail when a recovered group is smaller than `sqrt(|S|)`.
    pub size_floor_check: bool,
    /// Cap on local-search improvement passes.
    pub max_iters: usize,
    pub seed: u64,
    pub limits: ExactLimits,
}

impl RecoveryConfig {
    pub fn new(method: RecoveryMethod, seed: u64) -> Self {
        Self { method, size_floor_check: false, max_iters: 100, seed, limits: ExactLimits::default() }
    }
}

/// Queries every pair of `sample` and returns the answers as a labeling on
/// local indices `0..sample.len()`.
fn answer_instance<O: SameClusterOracle + ?Sized>(
    sample: &[usize],
    oracle: &O,
    ledger: &mut QueryLedger,
) -> Result<EdgeLabeling> {
    let mut yes = Vec::new();
    for a in 0..sample.len() {
        for b in a + 1..sample.len() {
            if oracle.query(sample[a], sample[b], ledger)?.is_yes() {
                yes.push((a, b));
            }
        }
    }
    EdgeLabeling::new(sample.len(), yes)
}

/// Recovers the groups of `sample` from all pairwise answers, as at most `k`
/// groups of original vertex ids. Charges `C(|S|, 2)` queries.
pub fn recover_sample_partition<O: SameClusterOracle + ?Sized>(
    sample: &[usize],
    oracle: &O,
    k: usize,
    config: &RecoveryConfig,
    ledger: &mut QueryLedger,
) -> Result<SamplePartition> {
    if sample.len() < 2 {
        return Err(Error::InvalidInput(format!("recovery needs at least 2 vertices, got {}", sample.len())));
    }
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    if config.method == RecoveryMethod::ExactMl && sample.len() > config.limits.max_partition_vertices {
        return Err(Error::LimitExceeded {
            what: "exact-ml recovery",
            size: sample.len(),
            limit: config.limits.max_partition_vertices,
        });
    }
    let answers = answer_instance(sample, oracle, ledger)?;
    let local = match config.method {
        RecoveryMethod::ExactMl => exact::opt_min_disagree_with(&answers, k, &config.limits)?.1,
        RecoveryMethod::LocalSearch => local_search(&answers, k, config),
    };
    let groups: Vec<Vec<usize>> =
        local.clusters().into_iter().map(|g| g.into_iter().map(|i| sample[i]).collect()).collect();
    if config.size_floor_check {
        let floor = (sample.len() as f64).sqrt();
        if let Some(g) = groups.iter().find(|g| (g.len() as f64) < floor) {
            return Err(Error::Precondition(format!(
                "recovered group of {} vertices is below the floor sqrt({}) = {floor:.2}",
                g.len(),
                sample.len()
            )));
        }
    }
    Ok(SamplePartition::new(groups))
}

/// Local-search minimum-disagreement clustering of `answers` with at most `k`
/// clusters.
fn local_search(answers: &EdgeLabeling, k: usize, config: &RecoveryConfig) -> Clustering {
    let n = answers.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::seeded(rng::derive(config.seed, TAG_RECOVERY)));

    // greedy: join the group with the most Yes answers if they are a majority
    let mut labels = vec![usize::MAX; n];
    let mut sizes: Vec<usize> = Vec::new();
    let mut yes = Vec::new();
    for &v in &order {
        yes.clear();
        yes.resize(sizes.len(), 0);
        for &u in answers.positive_neighbors(v) {
            if labels[u] != usize::MAX {
                yes[labels[u]] += 1;
            }
        }
        let best = (0..sizes.len()).filter(|&g| 2 * yes[g] > sizes[g]).max_by_key(|&g| (yes[g], usize::MAX - g));
        match best {
            Some(g) => {
                labels[v] = g;
                sizes[g] += 1;
            }
            None => {
                labels[v] = sizes.len();
                sizes.push(1);
            }
        }
    }

    let mut state = Groups::new(answers, labels, sizes.len());
    for _ in 0..config.max_iters {
        let moved = state.improve_moves(&order);
        let merged = state.improve_merges();
        if !moved && !merged {
            break;
        }
    }
    while state.live() > k {
        state.merge_smallest();
    }
    Clustering::from_labels(&state.labels)
}

/// Mutable clustering with per-group sizes.
struct Groups<'a> {
    answers: &'a EdgeLabeling,
    labels: Vec<usize>,
    sizes: Vec<usize>,
}

impl<'a> Groups<'a> {
    fn new(answers: &'a EdgeLabeling, labels: Vec<usize>, g: usize) -> Self {
        let mut sizes = vec![0; g];
        for &l in &labels {
            sizes[l] += 1;
        }
        Self { answers, labels, sizes }
    }

    fn live(&self) -> usize {
        self.sizes.iter().filter(|&&s| s > 0).count()
    }

    fn positive_counts(&self, v: usize) -> Vec<usize> {
        let mut pos = vec![0; self.sizes.len()];
        for &u in self.answers.positive_neighbors(v) {
            pos[self.labels[u]] += 1;
        }
        pos
    }

    /// Moves single vertices while some move lowers the disagreement.
    fn improve_moves(&mut self, order: &[usize]) -> bool {
        let mut any = false;
        for &v in order {
            let pos = self.positive_counts(v);
            let cur = self.labels[v];
            // cost contribution of v in group g: (|g| - pos_g) inside negatives
            // plus (deg - pos_g) outside positives, excluding v itself
            let deg = self.answers.positive_degree(v) as i64;
            let cost = |g: usize, size: usize| (size as i64 - pos[g] as i64) + (deg - pos[g] as i64);
            let here = cost(cur, self.sizes[cur] - 1);
            let mut best = (here, cur);
            for g in 0..self.sizes.len() {
                if g != cur && self.sizes[g] > 0 {
                    let c = cost(g, self.sizes[g]);
                    if c < best.0 {
                        best = (c, g);
                    }
                }
            }
            // a fresh singleton costs deg
            if self.sizes[cur] > 1 && deg < best.0 {
                let empty = self.sizes.iter().position(|&s| s == 0);
                let g = empty.unwrap_or_else(|| {
                    self.sizes.push(0);
                    self.sizes.len() - 1
                });
                best = (deg, g);
            }
            if best.1 != cur {
                self.sizes[cur] -= 1;
                self.sizes[best.1] += 1;
                self.labels[v] = best.1;
                any = true;
            }
        }
        any
    }

    fn cross_positives(&self) -> Vec<Vec<usize>> {
        let g = self.sizes.len();
        let mut cross = vec![vec![0; g]; g];
        for (u, v) in self.answers.positives() {
            let (a, b) = (self.labels[u], self.labels[v]);
            if a != b {
                cross[a][b] += 1;
                cross[b][a] += 1;
            }
        }
        cross
    }

    /// Merges the pair of groups with the largest positive gain, if any.
    fn improve_merges(&mut self) -> bool {
        let cross = self.cross_positives();
        let mut best: Option<(i64, usize, usize)> = None;
        for a in 0..self.sizes.len() {
            for b in a + 1..self.sizes.len() {
                if self.sizes[a] == 0 || self.sizes[b] == 0 {
                    continue;
                }
                let gain = 2 * cross[a][b] as i64 - (self.sizes[a] * self.sizes[b]) as i64;
                if gain > 0 && best.map_or(true, |(g, _, _)| gain > g) {
                    best = Some((gain, a, b));
                }
            }
        }
        match best {
            Some((_, a, b)) => {
                self.merge(b, a);
                true
            }
            None => false,
        }
    }

    fn merge(&mut self, from: usize, into: usize) {
        for l in &mut self.labels {
            if *l == from {
                *l = into;
            }
        }
        self.sizes[into] += self.sizes[from];
        self.sizes[from] = 0;
    }

    /// Folds the smallest group into the group it has most positives with.
    fn merge_smallest(&mut self) {
        let cross = self.cross_positives();
        let small = (0..self.sizes.len())
            .filter(|&g| self.sizes[g] > 0)
            .min_by_key(|&g| (self.sizes[g], g))
            .expect("at least two live groups");
        let into = (0..self.sizes.len())
            .filter(|&g| g != small && self.sizes[g] > 0)
            .max_by_key(|&g| (cross[small][g], usize::MAX - g))
            .expect("at least two live groups");
        self.merge(small, into);
    }
}

/// Sample size `ceil(scale * sqrt(n) / (k eps^2) * ln(m / (eps delta)))` with `m = ceil(4 / eps)`.
pub fn faulty_sample_size(n: usize, k: usize, epsilon: f64, delta: f64, scale: f64) -> usize {
    let m = (4.0 / epsilon).ceil();
    let r = scale * (n as f64).sqrt() / (k as f64 * epsilon * epsilon) * (m / (epsilon * delta)).ln();
    if r.is_finite() && r < usize::MAX as f64 {
        r.ceil().max(2.0) as usize
    } else {
        usize::MAX
    }
}

/// Overlap constant `ceil(16 ln^2(m / (eps delta)) / (k^2 eps^6))`.
pub fn overlap_bound(k: usize, epsilon: f64, delta: f64) -> usize {
    let m = (4.0 / epsilon).ceil();
    let l = (m / (epsilon * delta)).ln();
    (16.0 * l * l / ((k * k) as f64 * epsilon.powi(6))).ceil() as usize
}

/// The random parts `V^1..V^m` and samples `S^i` drawn from `V \ V^i` that
/// [`faulty_query_max_agree`] uses for the given seed.
pub fn faulty_parts_and_samples(n: usize, params: &AlgorithmParams) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut rng = rng::seeded(rng::derive(params.seed, TAG_MAX_AGREE));
    draw_parts_and_samples(n, params.k, params.epsilon, params, &mut rng)
}

fn draw_parts_and_samples(
    n: usize,
    k: usize,
    epsilon: f64,
    params: &AlgorithmParams,
    rng: &mut rng::Rng,
) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let m = num_parts(n, epsilon);
    let r = faulty_sample_size(n, k, epsilon, params.delta, params.sample_scale);
    let parts = random_parts(n, m, rng);
    let mut part_of = vec![0; n];
    for (i, p) in parts.iter().enumerate() {
        p.iter().for_each(|&v| part_of[v] = i);
    }
    let samples = parts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            draw_excluding(&part_of, i, n - p.len(), r, rng)
                .unwrap_or_else(|| (0..n).filter(|&u| part_of[u] != i).collect())
        })
        .collect();
    (parts, samples)
}

/// Closed-form bound `sum_i C(|S^i|, 2) <= m C(r_max, 2)` on the queries of
/// [`faulty_query_max_agree`].
pub fn faulty_max_agree_query_bound(n: usize, k: usize, epsilon: f64, delta: f64, scale: f64) -> u64 {
    if k <= 1 || n <= 1 {
        return 0;
    }
    let m = num_parts(n, epsilon);
    let r = faulty_sample_size(n, k, epsilon, delta, scale).min(n - n / m) as u64;
    m as u64 * (r * r.saturating_sub(1) / 2)
}

/// Closed-form bound on the queries of [`faulty_query_min_disagree`].
pub fn faulty_min_disagree_query_bound(n: usize, k: usize, epsilon: f64, delta: f64, scale: f64) -> u64 {
    faulty_min_bound_alpha(n, k, epsilon / 4.0, delta, scale)
}

fn faulty_min_bound_alpha(n: usize, k: usize, alpha: f64, delta: f64, scale: f64) -> u64 {
    if k <= 1 || n <= 1 {
        return 0;
    }
    let acc = inner_max_agree_accuracy(k, alpha);
    let s = faulty_sample_size(n, k, alpha, delta, scale).min(n) as u64;
    faulty_max_agree_query_bound(n, k, acc, delta, scale)
        + s * (s - 1) / 2
        + faulty_min_bound_alpha(n, k - 1, alpha, delta, scale)
}

/// Checks that every truth cluster has at least `n^{3/4}` vertices.
pub fn check_size_precondition(truth: &Clustering) -> Result<()> {
    let floor = (truth.n() as f64).powf(0.75);
    match truth.sizes().into_iter().min() {
        Some(s) if (s as f64) < floor => Err(Error::Precondition(format!(
            "smallest truth cluster has {s} vertices, below n^(3/4) = {floor:.1}"
        ))),
        _ => Ok(()),
    }
}

fn check_params(labeling: &EdgeLabeling, params: &AlgorithmParams, n_oracle: usize) -> Result<()> {
    params.validate()?;
    if n_oracle != labeling.n() {
        return Err(Error::SizeMismatch { expected: labeling.n(), got: n_oracle });
    }
    Ok(())
}

/// FaultyQueryMaxAgree.
pub fn faulty_query_max_agree<O: SameClusterOracle + ?Sized>(
    labeling: &EdgeLabeling,
    params: &AlgorithmParams,
    oracle: &O,
    ledger: &mut QueryLedger,
    config: &RecoveryConfig,
) -> Result<Clustering> {
    check_params(labeling, params, oracle.num_vertices())?;
    let seed = rng::derive(params.seed, TAG_MAX_AGREE);
    faulty_max_inner(labeling, params.k, params.epsilon, params, seed, oracle, ledger, config)
}

#[allow(clippy::too_many_arguments)]
fn faulty_max_inner<O: SameClusterOracle + ?Sized>(
    labeling: &EdgeLabeling,
    k: usize,
    epsilon: f64,
    params: &AlgorithmParams,
    seed: u64,
    oracle: &O,
    ledger: &mut QueryLedger,
    config: &RecoveryConfig,
) -> Result<Clustering> {
    let n = labeling.n();
    if k == 1 || n <= 2 {
        return Ok(Clustering::single(n));
    }
    let mut rng = rng::seeded(seed);
    let (parts, samples) = draw_parts_and_samples(n, k, epsilon, params, &mut rng);

    const NONE: usize = usize::MAX;
    // global cluster id per vertex: sample labels after alignment, overwritten
    // by the final assignment of each part
    let mut reference = vec![NONE; n];
    let mut final_labels = vec![NONE; n];
    let mut opened = 0usize;
    for (i, part) in parts.iter().enumerate() {
        let sample = &samples[i];
        if sample.len() < 2 {
            // nothing to recover from; keep everyone in the first cluster
            part.iter().for_each(|&v| final_labels[v] = 0);
            opened = opened.max(1);
            continue;
        }
        let mut cfg = config.clone();
        cfg.seed = rng::derive(config.seed, i as u64);
        let recovered = recover_sample_partition(sample, oracle, k, &cfg, ledger)?;
        let ids = align(labeling, &recovered, &reference, &mut opened, k);
        for (g, grp) in recovered.groups.iter().enumerate() {
            for &u in grp {
                if final_labels[u] == NONE {
                    reference[u] = ids[g];
                }
            }
        }

        let mut group_of = vec![NONE; n];
        for (g, grp) in recovered.groups.iter().enumerate() {
            grp.iter().for_each(|&u| group_of[u] = g);
        }
        let sizes: Vec<usize> = recovered.groups.iter().map(Vec::len).collect();
        let mut positives = vec![0; sizes.len()];
        for &v in part {
            positives.iter_mut().for_each(|p| *p = 0);
            for &u in labeling.positive_neighbors(v) {
                if group_of[u] != NONE {
                    positives[group_of[u]] += 1;
                }
            }
            let id = ids[best_group(&sizes, &positives)];
            final_labels[v] = id;
            reference[v] = id;
        }
    }

    let assembled = Clustering::from_labels(&final_labels);
    let single = Clustering::single(n);
    if labeling.agreement_cost(&single)? > labeling.agreement_cost(&assembled)? {
        Ok(single)
    } else {
        Ok(assembled)
    }
}

/// Maps recovered groups to global cluster ids by positive-edge affinity with
/// the vertices labelled so far. No queries are made.
fn align(
    labeling: &EdgeLabeling,
    recovered: &SamplePartition,
    reference: &[usize],
    opened: &mut usize,
    k: usize,
) -> Vec<usize> {
    let g = recovered.len();
    let mut ref_sizes = vec![0i64; *opened];
    for &r in reference {
        if r != usize::MAX {
            ref_sizes[r] += 1;
        }
    }
    // score = agreements gained by merging the group into the global cluster
    let mut scored = Vec::new();
    for (a, grp) in recovered.groups.iter().enumerate() {
        let mut pos = vec![0i64; *opened];
        for &u in grp {
            for &w in labeling.positive_neighbors(u) {
                if reference[w] != usize::MAX {
                    pos[reference[w]] += 1;
                }
            }
        }
        for j in 0..*opened {
            scored.push((2 * pos[j] - grp.len() as i64 * ref_sizes[j], a, j));
        }
    }
    scored.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut ids = vec![usize::MAX; g];
    let mut taken = vec![false; *opened];
    for &(score, a, j) in &scored {
        if score > 0 && ids[a] == usize::MAX && !taken[j] {
            ids[a] = j;
            taken[j] = true;
        }
    }
    for a in 0..g {
        if ids[a] != usize::MAX {
            continue;
        }
        if *opened < k {
            ids[a] = *opened;
            *opened += 1;
        } else {
            ids[a] = scored.iter().find(|&&(_, b, _)| b == a).map_or(0, |&(_, _, j)| j);
        }
    }
    ids
}

/// FaultyQueryMinDisAgree: the MinDisAgree recursion with faulty MaxAgree and
/// all-pairs sample recovery.
pub fn faulty_query_min_disagree<O: SameClusterOracle>(
    labeling: &EdgeLabeling,
    params: &AlgorithmParams,
    oracle: &O,
    ledger: &mut QueryLedger,
    config: &RecoveryConfig,
) -> Result<Clustering> {
    check_params(labeling, params, oracle.num_vertices())?;
    faulty_min_rec(labeling, params.k, params.epsilon / 4.0, params, params.seed, oracle, ledger, config)
}

#[allow(clippy::too_many_arguments)]
fn faulty_min_rec(
    labeling: &EdgeLabeling,
    k: usize,
    alpha: f64,
    params: &AlgorithmParams,
    seed: u64,
    oracle: &dyn SameClusterOracle,
    ledger: &mut QueryLedger,
    config: &RecoveryConfig,
) -> Result<Clustering> {
    let n = labeling.n();
    if k == 1 || n <= 2 {
        return Ok(Clustering::single(n));
    }
    let acc = inner_max_agree_accuracy(k, alpha);
    let clus_max =
        faulty_max_inner(labeling, k, acc, params, rng::derive(seed, TAG_MIN_MAX), oracle, ledger, config)?;

    let mut rng = rng::seeded(rng::derive(seed, TAG_MIN_SAMPLE));
    let size = faulty_sample_size(n, k, alpha, params.delta, params.sample_scale);
    let sample: Vec<usize> = if size >= n {
        (0..n).collect()
    } else {
        let mut s: Vec<usize> = (0..size).map(|_| rng.gen_range(0..n)).collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    if sample.len() < 2 {
        return Ok(clus_max);
    }
    let mut cfg = config.clone();
    cfg.seed = rng::derive(config.seed, seed);
    let groups = recover_sample_partition(&sample, oracle, k, &cfg, ledger)?;
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
        let inner =
            faulty_min_rec(&sub, s, alpha, params, rng::derive(seed, TAG_RECURSE), &sub_oracle, ledger, config)?;
        splice(n, &asm.large_labels, &asm.small, &inner)
    };
    better_min(labeling, clus_min, clus_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{planted_clustering, planted_instance, PlantedSpec};
    use crate::oracle::{FaultyOracle, PerfectOracle};

    #[test]
    fn noiseless_recovery_is_exact() {
        let truth = planted_clustering(&PlantedSpec::new(40, 3, 0.0, 2)).unwrap();
        let oracle = FaultyOracle::new(truth.clone(), 0.0, 5).unwrap();
        let sample: Vec<usize> = (0..40).step_by(3).collect();
        for method in [RecoveryMethod::ExactMl, RecoveryMethod::LocalSearch] {
            let mut ledger = QueryLedger::new();
            let got = recover_sample_partition(&sample, &oracle, 3, &RecoveryConfig::new(method, 1), &mut ledger);
            let got = got.unwrap();
            let want = SamplePartition::new(truth.restrict(&sample).clusters().into_iter()
                .map(|g| g.into_iter().map(|i| sample[i]).collect()).collect());
            assert!(got.same_partition(&want));
            assert_eq!(ledger.count(), (14 * 13 / 2) as u64);
        }
    }

    #[test]
    fn exact_ml_size_limit() {
        let oracle = PerfectOracle::new(Clustering::single(20));
        let sample: Vec<usize> = (0..15).collect();
        let err = recover_sample_partition(
            &sample,
            &oracle,
            2,
            &RecoveryConfig::new(RecoveryMethod::ExactMl, 0),
            &mut QueryLedger::new(),
        );
        assert!(matches!(err, Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn local_search_respects_k() {
        let truth = planted_clustering(&PlantedSpec::new(60, 5, 0.0, 2)).unwrap();
        let oracle = PerfectOracle::new(truth);
        let sample: Vec<usize> = (0..60).collect();
        let cfg = RecoveryConfig::new(RecoveryMethod::LocalSearch, 3);
        let got = recover_sample_partition(&sample, &oracle, 2, &cfg, &mut QueryLedger::new()).unwrap();
        assert!(got.len() <= 2);
        assert_eq!(got.num_vertices(), 60);
    }

    #[test]
    fn part_count_and_sizes() {
        assert_eq!(num_parts(1000, 0.5), 8);
        assert!(faulty_sample_size(10_000, 2, 0.5, 0.1, 1.0) > 900);
    }

    #[test]
    fn noiseless_planted_min_disagree() {
        let (l, truth) = planted_instance(&PlantedSpec::new(80, 2, 0.0, 4)).unwrap();
        let oracle = FaultyOracle::new(truth, 0.0, 1).unwrap();
        let cfg = RecoveryConfig::new(RecoveryMethod::LocalSearch, 0);
        let mut ledger = QueryLedger::new();
        let p = AlgorithmParams::new(2, 0.5, 3);
        let c = faulty_query_min_disagree(&l, &p, &oracle, &mut ledger, &cfg).unwrap();
        assert_eq!(l.disagreement_cost(&c).unwrap(), 0);
        assert!(ledger.count() <= faulty_min_disagree_query_bound(80, 2, 0.5, p.delta, 1.0));

        let mut ledger = QueryLedger::new();
        let c = faulty_query_max_agree(&l, &p, &oracle, &mut ledger, &cfg).unwrap();
        assert_eq!(l.agreement_cost(&c).unwrap(), l.num_pairs());
        assert!(ledger.count() <= faulty_max_agree_query_bound(80, 2, 0.5, p.delta, 1.0));
    }

    #[test]
    fn size_precondition() {
        let truth = Clustering::from_labels(&[0, 0, 0, 0, 0, 0, 0, 1]);
        assert!(check_size_precondition(&truth).is_err());
        assert!(check_size_precondition(&Clustering::single(16)).is_ok());
    }
}
