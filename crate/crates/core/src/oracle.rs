//! Same-cluster oracles and query accounting.
//!
//! An oracle answers "are `u` and `v` in the same optimal cluster?" with
//! respect to a fixed ground-truth clustering. The [`FaultyOracle`] flips each
//! pair's answer independently with probability `q`, decided once per pair:
//! asking again returns the same (possibly wrong) answer.
//!
//! Every query goes through a [`QueryLedger`] owned by the caller, so one
//! oracle can serve several measured runs.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Clustering;
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn from_bool(same: bool) -> Self {
        if same {
            Answer::Yes
        } else {
            Answer::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }

    fn flipped(self) -> Self {
        match self {
            Answer::Yes => Answer::No,
            Answer::No => Answer::Yes,
        }
    }
}

/// Counts queries issued by one run, optionally logging them.
#[derive(Clone, Debug, Default)]
pub struct QueryLedger {
    count: u64,
    log: Option<Vec<(usize, usize, Answer)>>,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_log() -> Self {
        Self { count: 0, log: Some(Vec::new()) }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn log(&self) -> Option<&[(usize, usize, Answer)]> {
        self.log.as_deref()
    }

    pub fn reset(&mut self) {
        self.count = 0;
        if let Some(log) = &mut self.log {
            log.clear();
        }
    }

    fn record(&mut self, u: usize, v: usize, answer: Answer) {
        self.count += 1;
        if let Some(log) = &mut self.log {
            log.push((u, v, answer));
        }
    }
}

/// A source of same-cluster answers over vertices `0..num_vertices()`.
pub trait SameClusterOracle: Sync {
    fn num_vertices(&self) -> usize;

    /// The answer for a valid pair, without accounting.
    fn answer(&self, u: usize, v: usize) -> Answer;

    /// Validates the pair, charges one query to `ledger` and answers it.
    fn query(&self, u: usize, v: usize, ledger: &mut QueryLedger) -> Result<Answer> {
        let n = self.num_vertices();
        if u >= n || v >= n {
            return Err(Error::Query { u, v, msg: format!("vertex out of range for n = {n}") });
        }
        if u == v {
            return Err(Error::Query { u, v, msg: "a vertex cannot be queried against itself".into() });
        }
        let answer = self.answer(u, v);
        ledger.record(u, v, answer);
        Ok(answer)
    }
}

impl<O: SameClusterOracle + ?Sized> SameClusterOracle for &O {
    fn num_vertices(&self) -> usize {
        (**self).num_vertices()
    }

    fn answer(&self, u: usize, v: usize) -> Answer {
        (**self).answer(u, v)
    }
}

/// Answers exactly according to `truth`.
#[derive(Clone, Debug)]
pub struct PerfectOracle {
    truth: Clustering,
}

impl PerfectOracle {
    pub fn new(truth: Clustering) -> Self {
        Self { truth }
    }

    pub fn truth(&self) -> &Clustering {
        &self.truth
    }
}

impl SameClusterOracle for PerfectOracle {
    fn num_vertices(&self) -> usize {
        self.truth.n()
    }

    fn answer(&self, u: usize, v: usize) -> Answer {
        Answer::from_bool(self.truth.same_cluster(u, v))
    }
}

#[derive(Debug)]
enum FlipStore {
    /// Drawn on first use and remembered.
    Lazy(Mutex<HashMap<(usize, usize), Answer>>),
    /// Every pair drawn up front, row-major over `u < v`.
    Materialized(Vec<bool>),
}

/// A perfect oracle whose answers are each wrong with probability `q`,
/// fixed per pair.
///
/// Whether a pair is flipped is a pure function of `(seed, u, v)`, so answers
/// do not depend on the order in which pairs are asked.
#[derive(Debug)]
pub struct FaultyOracle {
    truth: Clustering,
    q: f64,
    seed: u64,
    store: FlipStore,
}

impl FaultyOracle {
    /// `q` must lie in `[0, 1/3]`; `q = 0` behaves like a perfect oracle.
    pub fn new(truth: Clustering, q: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0 / 3.0 + 1e-12).contains(&q) {
            return Err(Error::InvalidParams(format!("faulty oracle error rate {q} outside [0, 1/3]")));
        }
        Ok(Self { truth, q, seed, store: FlipStore::Lazy(Mutex::new(HashMap::new())) })
    }

    /// Draws every pair's answer immediately instead of on first use.
    pub fn materialized(truth: Clustering, q: f64, seed: u64) -> Result<Self> {
        let mut oracle = Self::new(truth, q, seed)?;
        let n = oracle.truth.n();
        let mut flips = Vec::with_capacity((n * n.saturating_sub(1)) / 2);
        for u in 0..n {
            for v in u + 1..n {
                flips.push(oracle.draw_flip(u, v));
            }
        }
        oracle.store = FlipStore::Materialized(flips);
        Ok(oracle)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn truth(&self) -> &Clustering {
        &self.truth
    }

    /// Number of pairs whose answer has been fixed so far.
    pub fn memoized_pairs(&self) -> usize {
        match &self.store {
            FlipStore::Lazy(memo) => memo.lock().unwrap().len(),
            FlipStore::Materialized(flips) => flips.len(),
        }
    }

    fn draw_flip(&self, u: usize, v: usize) -> bool {
        if self.q == 0.0 {
            return false;
        }
        let key = ((u as u64) << 32) ^ v as u64;
        rng::unit_f64(rng::splitmix64(self.seed ^ rng::splitmix64(key))) < self.q
    }

    fn pair_index(&self, u: usize, v: usize) -> usize {
        let n = self.truth.n();
        u * n - u * (u + 1) / 2 + (v - u - 1)
    }
}

impl SameClusterOracle for FaultyOracle {
    fn num_vertices(&self) -> usize {
        self.truth.n()
    }

    fn answer(&self, u: usize, v: usize) -> Answer {
        let (u, v) = (u.min(v), u.max(v));
        let truth = Answer::from_bool(self.truth.same_cluster(u, v));
        match &self.store {
            FlipStore::Lazy(memo) => *memo.lock().unwrap().entry((u, v)).or_insert_with(|| {
                if self.draw_flip(u, v) {
                    truth.flipped()
                } else {
                    truth
                }
            }),
            FlipStore::Materialized(flips) => {
                if flips[self.pair_index(u, v)] {
                    truth.flipped()
                } else {
                    truth
                }
            }
        }
    }
}

/// An oracle over a subset of another oracle's vertices: local vertex `i`
/// is `vertices[i]` of the inner oracle.
pub struct SubsetOracle<'a, O: ?Sized> {
    inner: &'a O,
    vertices: &'a [usize],
}

impl<'a, O: SameClusterOracle + ?Sized> SubsetOracle<'a, O> {
    pub fn new(inner: &'a O, vertices: &'a [usize]) -> Self {
        Self { inner, vertices }
    }
}

impl<O: SameClusterOracle + ?Sized> SameClusterOracle for SubsetOracle<'_, O> {
    fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    fn answer(&self, u: usize, v: usize) -> Answer {
        self.inner.answer(self.vertices[u], self.vertices[v])
    }
}

/// Disjoint, non-empty groups of sample vertices.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SamplePartition {
    pub groups: Vec<Vec<usize>>,
}

impl SamplePartition {
    pub fn new(groups: Vec<Vec<usize>>) -> Self {
        Self { groups }
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn num_vertices(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    /// Partition equality regardless of group order and member order.
    pub fn same_partition(&self, other: &SamplePartition) -> bool {
        canonical(&self.groups) == canonical(&other.groups)
    }
}

fn canonical(groups: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = groups
        .iter()
        .filter(|g| !g.is_empty())
        .map(|g| {
            let mut g = g.clone();
            g.sort_unstable();
            g
        })
        .collect();
    out.sort();
    out
}

/// Partitions `sample` with at most `k_max · |sample|` queries.
///
/// Each vertex is compared against the first member (representative) of every
/// group formed so far, in order, and joins the first group that answers Yes.
/// If none does it opens a new group, unless `k_max` groups already exist, in
/// which case it joins the group whose representative was queried last. That
/// fallback can only trigger with an inconsistent (faulty) oracle.
pub fn partition_sample<O: SameClusterOracle + ?Sized>(
    sample: &[usize],
    oracle: &O,
    k_max: usize,
    ledger: &mut QueryLedger,
) -> Result<SamplePartition> {
    if sample.is_empty() {
        return Err(Error::InvalidInput("cannot partition an empty sample".into()));
    }
    if k_max == 0 {
        return Err(Error::InvalidParams("k_max must be at least 1".into()));
    }
    let mut seen = std::collections::HashSet::with_capacity(sample.len());
    if let Some(&dup) = sample.iter().find(|&&v| !seen.insert(v)) {
        return Err(Error::InvalidInput(format!("sample lists vertex {dup} twice")));
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &v in sample {
        let mut joined = None;
        for (g, group) in groups.iter().enumerate() {
            if oracle.query(group[0], v, ledger)?.is_yes() {
                joined = Some(g);
                break;
            }
        }
        match joined {
            Some(g) => groups[g].push(v),
            None if groups.len() < k_max => groups.push(vec![v]),
            None => groups.last_mut().expect("k_max >= 1 groups exist").push(v),
        }
    }
    Ok(SamplePartition { groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{planted_clustering, PlantedSpec};

    #[test]
    fn perfect_answers_follow_truth() {
        let truth = Clustering::from_labels(&[0, 0, 1, 1, 0]);
        let oracle = PerfectOracle::new(truth);
        let mut ledger = QueryLedger::new();
        assert_eq!(oracle.query(0, 4, &mut ledger).unwrap(), Answer::Yes);
        assert_eq!(oracle.query(0, 2, &mut ledger).unwrap(), Answer::No);
        assert_eq!(ledger.count(), 2);
        assert!(oracle.query(1, 1, &mut ledger).is_err());
        assert!(oracle.query(0, 5, &mut ledger).is_err());
        assert_eq!(ledger.count(), 2);
    }

    #[test]
    fn faulty_answers_are_sticky() {
        let truth = planted_clustering(&PlantedSpec::new(40, 3, 0.0, 1)).unwrap();
        let oracle = FaultyOracle::new(truth, 1.0 / 3.0, 99).unwrap();
        let mut ledger = QueryLedger::with_log();
        let first = oracle.query(3, 17, &mut ledger).unwrap();
        for _ in 0..99 {
            assert_eq!(oracle.query(3, 17, &mut ledger).unwrap(), first);
            assert_eq!(oracle.query(17, 3, &mut ledger).unwrap(), first);
        }
        assert_eq!(ledger.count(), 199);
        assert_eq!(ledger.log().unwrap().len(), 199);
        assert_eq!(oracle.memoized_pairs(), 1);
    }

    #[test]
    fn faulty_flip_rate() {
        let n = 300;
        let truth = planted_clustering(&PlantedSpec::new(n, 3, 0.0, 8)).unwrap();
        let q = 1.0 / 3.0;
        let oracle = FaultyOracle::new(truth.clone(), q, 4242).unwrap();
        let mut flips = 0u64;
        for u in 0..n {
            for v in u + 1..n {
                if oracle.answer(u, v).is_yes() != truth.same_cluster(u, v) {
                    flips += 1;
                }
            }
        }
        let pairs = (n * (n - 1) / 2) as f64;
        let sd = (pairs * q * (1.0 - q)).sqrt();
        assert!((flips as f64 - q * pairs).abs() <= 3.0 * sd, "{flips} flips of {pairs}");
    }

    #[test]
    fn materialized_matches_lazy() {
        let truth = planted_clustering(&PlantedSpec::new(25, 2, 0.0, 3)).unwrap();
        let lazy = FaultyOracle::new(truth.clone(), 0.25, 7).unwrap();
        let full = FaultyOracle::materialized(truth, 0.25, 7).unwrap();
        for u in 0..25 {
            for v in 0..25 {
                if u != v {
                    assert_eq!(lazy.answer(u, v), full.answer(u, v));
                }
            }
        }
    }

    #[test]
    fn faulty_rejects_large_q() {
        assert!(FaultyOracle::new(Clustering::single(3), 0.4, 0).is_err());
        assert!(FaultyOracle::new(Clustering::single(3), -0.1, 0).is_err());
    }

    #[test]
    fn partition_sample_examples() {
        let truth = planted_clustering(&PlantedSpec::new(30, 2, 0.0, 5)).unwrap();
        let oracle = PerfectOracle::new(truth.clone());
        let mut ledger = QueryLedger::new();

        let one = partition_sample(&[4], &oracle, 2, &mut ledger).unwrap();
        assert_eq!(one.groups, vec![vec![4]]);
        assert_eq!(ledger.count(), 0);

        let c0 = truth.clusters();
        let sample = vec![c0[0][0], c0[1][0], c0[0][1], c0[1][1], c0[0][2]];
        let parts = partition_sample(&sample, &oracle, 2, &mut ledger).unwrap();
        let expected = SamplePartition::new(vec![vec![c0[0][0], c0[0][1], c0[0][2]], vec![c0[1][0], c0[1][1]]]);
        assert!(parts.same_partition(&expected));
        assert!(ledger.count() <= 10);

        let inside: Vec<usize> = c0[1].iter().copied().take(6).collect();
        let parts = partition_sample(&inside, &oracle, 2, &mut QueryLedger::new()).unwrap();
        assert_eq!(parts.len(), 1);

        assert!(partition_sample(&[], &oracle, 2, &mut ledger).is_err());
        assert!(partition_sample(&[1, 1], &oracle, 2, &mut ledger).is_err());
    }

    #[test]
    fn partition_sample_fallback_caps_groups() {
        // an oracle that never says Yes
        let truth = Clustering::singletons(6);
        let oracle = PerfectOracle::new(truth);
        let mut ledger = QueryLedger::new();
        let parts = partition_sample(&[0, 1, 2, 3, 4, 5], &oracle, 2, &mut ledger).unwrap();
        assert_eq!(parts.groups, vec![vec![0], vec![1, 2, 3, 4, 5]]);
        assert!(ledger.count() <= 12);
    }
}
