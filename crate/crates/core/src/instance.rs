//! Correlation-clustering instances and clusterings.
//!
//! An [`EdgeLabeling`] is a complete graph on `n` vertices where every pair is
//! labelled `+` or `−`. Only the positive pairs are stored; every other pair is
//! negative. A [`Clustering`] assigns each vertex a cluster id; ids are kept
//! canonical (numbered by first occurrence in vertex order) so that two
//! clusterings describing the same partition compare equal.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Number of unordered pairs on `n` vertices.
pub fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// A ±-labelled complete graph. Pairs not listed as positive are negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabeling {
    n: usize,
    // sorted positive neighbourhoods
    adj: Vec<Vec<usize>>,
    num_positive: usize,
}

impl EdgeLabeling {
    /// Builds a labelling from its positive pairs. Pairs may be given in
    /// either orientation; self pairs, out-of-range vertices and duplicates
    /// are rejected.
    pub fn new(n: usize, positives: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut count = 0;
        for (a, b) in positives {
            if a >= n || b >= n {
                return Err(Error::InvalidInput(format!("pair ({a}, {b}) out of range for n = {n}")));
            }
            if a == b {
                return Err(Error::InvalidInput(format!("self pair ({a}, {a})")));
            }
            adj[a].push(b);
            adj[b].push(a);
            count += 1;
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (u, x) = (v.min(w[0]), v.max(w[0]));
                return Err(Error::InvalidInput(format!("duplicate pair ({u}, {x})")));
            }
        }
        Ok(Self { n, adj, num_positive: count })
    }

    /// The all-negative labelling.
    pub fn all_negative(n: usize) -> Self {
        Self { n, adj: vec![Vec::new(); n], num_positive: 0 }
    }

    /// The all-positive labelling.
    pub fn all_positive(n: usize) -> Self {
        let adj = (0..n).map(|v| (0..n).filter(|&u| u != v).collect()).collect();
        Self { n, adj, num_positive: pair_count(n) as usize }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_positive(&self) -> usize {
        self.num_positive
    }

    pub fn num_pairs(&self) -> u64 {
        pair_count(self.n)
    }

    pub fn is_positive(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Γ⁺(v), sorted.
    pub fn positive_neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn positive_degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Positive pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn positives(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// The labelling induced on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        let mut count = 0;
        for (i, &v) in vertices.iter().enumerate() {
            for &u in &self.adj[v] {
                let j = local[u];
                if j != usize::MAX {
                    adj[i].push(j);
                    if j > i {
                        count += 1;
                    }
                }
            }
            adj[i].sort_unstable();
        }
        Self { n: vertices.len(), adj, num_positive: count }
    }

    fn check(&self, clustering: &Clustering) -> Result<()> {
        if clustering.n() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, got: clustering.n() });
        }
        Ok(())
    }

    /// Positive pairs whose endpoints share a cluster.
    fn positive_inside(&self, clustering: &Clustering) -> u64 {
        let a = clustering.assignment();
        self.positives().filter(|&(u, v)| a[u] == a[v]).count() as u64
    }

    /// Negative pairs inside clusters plus positive pairs across clusters.
    pub fn disagreement_cost(&self, clustering: &Clustering) -> Result<u64> {
        self.check(clustering)?;
        let inside_pairs: u64 = clustering.sizes().iter().map(|&s| pair_count(s)).sum();
        let pos_in = self.positive_inside(clustering);
        // (inside − pos_in) negatives inside + (M − pos_in) positives across
        Ok(inside_pairs + self.num_positive as u64 - 2 * pos_in)
    }

    /// Positive pairs inside clusters plus negative pairs across clusters.
    pub fn agreement_cost(&self, clustering: &Clustering) -> Result<u64> {
        Ok(self.num_pairs() - self.disagreement_cost(clustering)?)
    }
}

/// A partition of `0..n` into `k` non-empty clusters with canonical ids.
///
/// Serialises as its label vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", from = "Vec<usize>")]
pub struct Clustering {
    assignment: Vec<usize>,
    k: usize,
}

impl From<Vec<usize>> for Clustering {
    fn from(labels: Vec<usize>) -> Self {
        Self::from_labels(&labels)
    }
}

impl From<Clustering> for Vec<usize> {
    fn from(c: Clustering) -> Self {
        c.assignment
    }
}

impl Clustering {
    /// Canonicalises arbitrary labels: ids are renumbered by first occurrence.
    pub fn from_labels<T: Copy + Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(*l).or_insert(next)
            })
            .collect();
        Self { assignment, k: ids.len() }
    }

    /// Builds a clustering from disjoint groups covering `0..n` exactly once.
    pub fn from_groups(n: usize, groups: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (g, group) in groups.iter().enumerate() {
            for &v in group {
                if v >= n {
                    return Err(Error::InvalidInput(format!("vertex {v} out of range for n = {n}")));
                }
                if labels[v] != usize::MAX {
                    return Err(Error::InvalidInput(format!("vertex {v} appears twice")));
                }
                labels[v] = g;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidInput(format!("vertex {v} is missing")));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn single(n: usize) -> Self {
        Self { assignment: vec![0; n], k: usize::from(n > 0) }
    }

    pub fn singletons(n: usize) -> Self {
        Self { assignment: (0..n).collect(), k: n }
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn same_cluster(&self, u: usize, v: usize) -> bool {
        self.assignment[u] == self.assignment[v]
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    /// Clusters as sorted vertex lists, in id order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// The partition induced on `vertices` (vertex `vertices[i]` becomes `i`).
    pub fn restrict(&self, vertices: &[usize]) -> Self {
        let labels: Vec<usize> = vertices.iter().map(|&v| self.assignment[v]).collect();
        Self::from_labels(&labels)
    }
}

/// Parameters of the planted-partition generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub n: usize,
    pub k: usize,
    /// Probability that a pair's label disagrees with the planted clustering.
    pub noise: f64,
    pub seed: u64,
    /// Every planted cluster has at least `ceil(min_cluster_fraction · n)` vertices.
    pub min_cluster_fraction: f64,
}

impl PlantedSpec {
    pub fn new(n: usize, k: usize, noise: f64, seed: u64) -> Self {
        Self { n, k, noise, seed, min_cluster_fraction: 0.0 }
    }

    pub fn with_min_cluster_fraction(mut self, fraction: f64) -> Self {
        self.min_cluster_fraction = fraction;
        self
    }

    fn min_size(&self) -> usize {
        ((self.min_cluster_fraction * self.n as f64) - 1e-9).ceil().max(1.0) as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.n {
            return Err(Error::Generation(format!("need 1 <= k <= n, got k = {}, n = {}", self.k, self.n)));
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(Error::Generation(format!("noise {} outside [0, 1]", self.noise)));
        }
        if !(0.0..=1.0).contains(&self.min_cluster_fraction) {
            return Err(Error::Generation(format!(
                "min_cluster_fraction {} outside [0, 1]",
                self.min_cluster_fraction
            )));
        }
        if self.min_size() * self.k > self.n {
            return Err(Error::Generation(format!(
                "{} clusters of at least {} vertices do not fit in n = {}",
                self.k,
                self.min_size(),
                self.n
            )));
        }
        Ok(())
    }
}

/// Draws only the planted ground truth of `spec` (no labels). This is the
/// same clustering that [`planted_instance`] returns for the same spec.
pub fn planted_clustering(spec: &PlantedSpec) -> Result<Clustering> {
    spec.validate()?;
    let mut rng = rng::seeded(spec.seed);
    Ok(draw_truth(spec, &mut rng))
}

fn draw_truth(spec: &PlantedSpec, rng: &mut rng::Rng) -> Clustering {
    let floor = spec.min_size();
    let mut sizes = vec![floor; spec.k];
    for _ in 0..spec.n - floor * spec.k {
        sizes[rng.gen_range(0..spec.k)] += 1;
    }
    let mut labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &s)| std::iter::repeat(c).take(s)).collect();
    labels.shuffle(rng);
    Clustering::from_labels(&labels)
}

/// Generates a labelling that agrees with a random planted clustering except
/// that each pair is flipped independently with probability `spec.noise`.
/// Returns the labelling and the planted clustering.
pub fn planted_instance(spec: &PlantedSpec) -> Result<(EdgeLabeling, Clustering)> {
    spec.validate()?;
    let mut rng = rng::seeded(spec.seed);
    let truth = draw_truth(spec, &mut rng);
    let mut positives = Vec::new();
    for u in 0..spec.n {
        for v in u + 1..spec.n {
            let same = truth.same_cluster(u, v);
            let flip = spec.noise > 0.0 && rng.gen_bool(spec.noise);
            if same != flip {
                positives.push((u, v));
            }
        }
    }
    Ok((EdgeLabeling::new(spec.n, positives)?, truth))
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::parse(line, format!("expected {what}, found {tok:?}")))
}

/// Reads the `p cc <n> <num_positives>` instance format.
pub fn read_instance(reader: impl BufRead) -> Result<EdgeLabeling> {
    let mut header: Option<(usize, usize)> = None;
    let mut pairs = BTreeSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let toks: Vec<&str> = strip_comment(&line).split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        match (header, toks[0]) {
            (None, "p") => {
                if toks.len() != 4 || toks[1] != "cc" {
                    return Err(Error::parse(lineno, "malformed header, expected `p cc <n> <num_positives>`"));
                }
                let n = parse_usize(toks[2], lineno, "vertex count")?;
                let m = parse_usize(toks[3], lineno, "positive count")?;
                header = Some((n, m));
            }
            (None, _) => return Err(Error::parse(lineno, "missing `p cc` header")),
            (Some(_), "p") => return Err(Error::parse(lineno, "duplicate header")),
            (Some((n, _)), "+") => {
                if toks.len() != 3 {
                    return Err(Error::parse(lineno, "expected `+ <u> <v>`"));
                }
                let u = parse_usize(toks[1], lineno, "vertex")?;
                let v = parse_usize(toks[2], lineno, "vertex")?;
                if u >= n || v >= n {
                    return Err(Error::parse(lineno, format!("vertex out of range for n = {n}")));
                }
                if u == v {
                    return Err(Error::parse(lineno, "self pair"));
                }
                if !pairs.insert((u.min(v), u.max(v))) {
                    return Err(Error::parse(lineno, format!("duplicate pair ({}, {})", u.min(v), u.max(v))));
                }
            }
            (Some(_), tok) => return Err(Error::parse(lineno, format!("unexpected token {tok:?}"))),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(0, "empty instance file"))?;
    if pairs.len() != m {
        return Err(Error::parse(0, format!("header declares {m} positive pairs, found {}", pairs.len())));
    }
    EdgeLabeling::new(n, pairs)
}

pub fn write_instance(labeling: &EdgeLabeling, mut writer: impl Write) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "p cc {} {}", labeling.n(), labeling.num_positive()).unwrap();
    for (u, v) in labeling.positives() {
        writeln!(out, "+ {u} {v}").unwrap();
    }
    writer.write_all(out.as_bytes())?;
    Ok(())
}

/// Reads a clustering: one line per cluster, every vertex of `0..n` exactly
/// once, where `n` is the total number of listed vertices.
pub fn read_clustering(reader: impl BufRead) -> Result<Clustering> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut seen_at: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let toks: Vec<&str> = strip_comment(&line).split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let mut group = Vec::with_capacity(toks.len());
        for tok in toks {
            let v = parse_usize(tok, lineno, "vertex")?;
            if let Some(first) = seen_at.insert(v, lineno) {
                return Err(Error::parse(lineno, format!("vertex {v} repeated (first seen on line {first})")));
            }
            group.push(v);
        }
        groups.push(group);
    }
    let n = seen_at.len();
    if let Some((&v, &line)) = seen_at.iter().filter(|(&v, _)| v >= n).min() {
        return Err(Error::parse(line, format!("vertex {v} out of range: {n} vertices listed, so some vertex is missing")));
    }
    Clustering::from_groups(n, &groups)
}

pub fn write_clustering(clustering: &Clustering, mut writer: impl Write) -> Result<()> {
    let mut out = String::new();
    for cluster in clustering.clusters() {
        let line: Vec<String> = cluster.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    writer.write_all(out.as_bytes())?;
    Ok(())
}
