use crate::error::{Error, Result};
use crate::instance::{Clustering, EdgeLabeling};

use super::ExactLimits;

/// Enumerates the set partitions of `0..n` into at most `k_max` non-empty
/// blocks as restricted-growth strings, in lexicographic order.
#[derive(Clone, Debug)]
pub struct PartitionIterator {
    labels: Vec<usize>,
    k_max: usize,
    done: bool,
}

impl PartitionIterator {
    pub fn new(n: usize, k_max: usize) -> Self {
        Self { labels: vec![0; n], k_max, done: k_max == 0 && n > 0 }
    }

    fn advance(&mut self) -> bool {
        let n = self.labels.len();
        // prefix maxima
        let mut pmax = vec![0; n];
        for i in 1..n {
            pmax[i] = pmax[i - 1].max(self.labels[i - 1]);
        }
        for i in (1..n).rev() {
            let next = self.labels[i] + 1;
            if next <= pmax[i] + 1 && next < self.k_max {
                self.labels[i] = next;
                for l in &mut self.labels[i + 1..] {
                    *l = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for PartitionIterator {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.labels.clone();
        if !self.advance() {
            self.done = true;
        }
        Some(out)
    }
}

fn check_size(labeling: &EdgeLabeling, k: usize, limits: &ExactLimits) -> Result<()> {
    if labeling.n() > limits.max_partition_vertices {
        return Err(Error::LimitExceeded {
            what: "partition enumeration",
            size: labeling.n(),
            limit: limits.max_partition_vertices,
        });
    }
    if k == 0 && labeling.n() > 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    Ok(())
}

struct Search<'a> {
    labeling: &'a EdgeLabeling,
    k: usize,
    labels: Vec<usize>,
    best_cost: u64,
    best: Vec<usize>,
}

impl Search<'_> {
    // depth-first over restricted-growth strings in lexicographic order; only a
    // strictly better cost replaces the incumbent, so ties go to the first
    // string in enumeration order
    fn run(&mut self, i: usize, used: usize, cost: u64) {
        if cost >= self.best_cost {
            return;
        }
        let n = self.labels.len();
        if i == n {
            self.best_cost = cost;
            self.best.copy_from_slice(&self.labels);
            return;
        }
        let max_label = used.min(self.k - 1);
        for label in 0..=max_label {
            let mut delta = 0;
            for j in 0..i {
                let same = self.labels[j] == label;
                if same != self.labeling.is_positive(i, j) {
                    delta += 1;
                }
            }
            self.labels[i] = label;
            let used_next = if label == used { used + 1 } else { used };
            self.run(i + 1, used_next, cost + delta);
        }
    }
}

/// Minimum disagreement over all partitions into at most `k` blocks, with the
/// first minimiser in restricted-growth order.
pub fn opt_min_disagree(labeling: &EdgeLabeling, k: usize) -> Result<(u64, Clustering)> {
    opt_min_disagree_with(labeling, k, &ExactLimits::default())
}

pub fn opt_min_disagree_with(labeling: &EdgeLabeling, k: usize, limits: &ExactLimits) -> Result<(u64, Clustering)> {
    check_size(labeling, k, limits)?;
    let n = labeling.n();
    if n == 0 {
        return Ok((0, Clustering::single(0)));
    }
    let mut search = Search { labeling, k, labels: vec![0; n], best_cost: u64::MAX, best: vec![0; n] };
    search.run(0, 0, 0);
    Ok((search.best_cost, Clustering::from_labels(&search.best)))
}

/// Maximum agreement over partitions into at most `k` blocks. The maximiser is
/// the same partition [`opt_min_disagree`] returns.
pub fn opt_max_agree(labeling: &EdgeLabeling, k: usize) -> Result<(u64, Clustering)> {
    opt_max_agree_with(labeling, k, &ExactLimits::default())
}

pub fn opt_max_agree_with(labeling: &EdgeLabeling, k: usize, limits: &ExactLimits) -> Result<(u64, Clustering)> {
    let (dis, clustering) = opt_min_disagree_with(labeling, k, limits)?;
    Ok((labeling.num_pairs() - dis, clustering))
}
