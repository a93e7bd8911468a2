//! Brute-force checks of every reduction step on a chain of artifacts.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::sat::{cnf_satisfiable, max_cnf_satisfied, max_nae_satisfied, nae_satisfiable, two_coloring};
use crate::exact::slack::{certify_with_hint, SlackVerdict, MAX_DEGREE};
use crate::exact::{max_val_nae_with, max_val_with, opt_min_disagree_with, ExactLimits, Fraction};
use crate::formula::{Clause, CnfFormula, Hypergraph3, Literal, NaeFormula};
use crate::instance::{Clustering, EdgeLabeling};

use super::sat_stages::expected_counts;
use super::{extend_assignment, pull_back, reduce_once, Artifact, Stage};
use super::coloring_to_clustering;

/// How much exact work the verifier may do.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyBudget {
    pub limits: ExactLimits,
    /// Largest number of violated clauses the SAT-based maximum searches for
    /// when a formula is too large to enumerate.
    pub max_violated: usize,
    /// Downstream assignments are enumerated for the pullback check up to
    /// this many variables and sampled beyond it.
    pub pullback_enumeration_vars: usize,
    pub pullback_samples: usize,
    pub seed: u64,
    pub epsilons: Vec<f64>,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        Self {
            limits: ExactLimits::default(),
            max_violated: 8,
            pullback_enumeration_vars: 16,
            pullback_samples: 256,
            seed: 0,
            epsilons: (1..=9).map(|i| i as f64 / 10.0).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl PropertyCheck {
    fn new(name: &str, status: CheckStatus, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), status, detail: detail.into() }
    }

    fn of(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self::new(name, CheckStatus::from_bool(ok), detail)
    }
}

/// Optimum of one artifact. For formulas and hypergraphs `value` is the best
/// satisfied (bichromatic) fraction; for a correlation instance `excess` is
/// the optimal cost minus `M - N` (a lower bound when the slack certificate
/// only rules out the baseline).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageValue {
    pub stage: Stage,
    pub perfect: Option<bool>,
    pub value: Option<Fraction>,
    pub excess: Option<i64>,
    pub method: String,
    #[serde(skip)]
    witness: Option<Vec<bool>>,
}

impl StageValue {
    fn skipped(stage: Stage, why: String) -> Self {
        Self { stage, perfect: None, value: None, excess: None, method: why, witness: None }
    }

    fn fraction(stage: Stage, value: Fraction, method: &str, witness: Option<Vec<bool>>) -> Self {
        Self { stage, perfect: Some(value.is_one()), value: Some(value), excess: None, method: method.into(), witness }
    }
}

/// One gap inequality at one `epsilon`: a violation is a downstream optimum
/// of at least `t_down` with an upstream optimum below `t_up`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapCheck {
    pub epsilon: f64,
    pub t_down: f64,
    pub t_up: f64,
    pub downstream: Option<Fraction>,
    pub upstream: Option<Fraction>,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub from: Stage,
    pub to: Stage,
    pub checks: Vec<PropertyCheck>,
    pub gaps: Vec<GapCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub values: Vec<StageValue>,
    pub stages: Vec<StageReport>,
}

impl GapReport {
    fn statuses(&self) -> impl Iterator<Item = CheckStatus> + '_ {
        self.stages.iter().flat_map(|s| s.checks.iter().map(|c| c.status).chain(s.gaps.iter().map(|g| g.status)))
    }

    /// No check failed.
    pub fn passed(&self) -> bool {
        self.statuses().all(|s| s != CheckStatus::Fail)
    }

    /// Every check was decided.
    pub fn complete(&self) -> bool {
        self.statuses().all(|s| s != CheckStatus::Skipped)
    }

    /// `"from -> to: property (detail)"` for every failed check.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in &self.stages {
            for c in s.checks.iter().filter(|c| c.status == CheckStatus::Fail) {
                out.push(format!("{} -> {}: {} ({})", s.from, s.to, c.name, c.detail));
            }
            for g in s.gaps.iter().filter(|g| g.status == CheckStatus::Fail) {
                out.push(format!(
                    "{} -> {}: gap at eps {} (downstream {:?} >= {:.4}, upstream {:?} < {:.4})",
                    s.from, s.to, g.epsilon, g.downstream, g.t_down, g.upstream, g.t_up
                ));
            }
        }
        out
    }
}

/// Checks every consecutive pair of `artifacts` against the properties of its
/// reduction step. The artifacts must be consecutive stages of the chain.
pub fn verify_reduction_gap(artifacts: &[Artifact], budget: &VerifyBudget) -> Result<GapReport> {
    if artifacts.is_empty() {
        return Err(Error::InvalidInput("no artifacts to verify".into()));
    }
    for w in artifacts.windows(2) {
        if w[0].stage().next() != Some(w[1].stage()) {
            return Err(Error::InvalidInput(format!("{} does not reduce to {}", w[0].stage(), w[1].stage())));
        }
    }
    let mut values: Vec<StageValue> = Vec::with_capacity(artifacts.len());
    for (i, a) in artifacts.iter().enumerate() {
        // a proper colouring upstream gives a candidate clustering at M - N
        let hint = match (i.checked_sub(1).map(|j| (&artifacts[j], &values[j])), a) {
            (Some((Artifact::Hypergraph(h), v)), Artifact::Correlation { labeling, .. }) => v
                .witness
                .as_ref()
                .and_then(|w| coloring_to_clustering(h, w).ok())
                .filter(|c| c.n() == labeling.n()),
            _ => None,
        };
        values.push(stage_value(a, hint.as_ref(), budget)?);
    }
    let mut stages = Vec::new();
    for (i, w) in artifacts.windows(2).enumerate() {
        stages.push(check_step(&w[0], &w[1], &values[i], &values[i + 1], budget)?);
    }
    Ok(GapReport { values, stages })
}

fn hypergraph_formula(h: &Hypergraph3) -> Result<NaeFormula> {
    let clauses = h.edges().iter().map(|e| e.iter().map(|&v| Literal::pos(v)).collect()).collect();
    NaeFormula::new(h.num_vertices(), 3, clauses)
}

fn nae_value(stage: Stage, f: &NaeFormula, budget: &VerifyBudget) -> Result<StageValue> {
    if let Some(a) = nae_satisfiable(f)? {
        return Ok(StageValue::fraction(stage, Fraction::one(), "sat", Some(a)));
    }
    if f.num_vars() <= budget.limits.max_boolean_vars {
        return Ok(StageValue::fraction(stage, max_val_nae_with(f, &budget.limits)?, "enumeration", None));
    }
    Ok(match max_nae_satisfied(f, budget.max_violated)? {
        Some((best, a)) => {
            StageValue::fraction(stage, Fraction::new(best as u64, f.num_clauses() as u64), "max-sat", Some(a))
        }
        None => StageValue::skipped(stage, format!("more than {} clauses must be violated", budget.max_violated)),
    })
}

fn cnf_value(f: &CnfFormula, budget: &VerifyBudget) -> Result<StageValue> {
    let stage = Stage::E3sat;
    if let Some(a) = cnf_satisfiable(f)? {
        return Ok(StageValue::fraction(stage, Fraction::one(), "sat", Some(a)));
    }
    if f.num_vars() <= budget.limits.max_boolean_vars {
        return Ok(StageValue::fraction(stage, max_val_with(f, &budget.limits)?, "enumeration", None));
    }
    Ok(match max_cnf_satisfied(f, budget.max_violated)? {
        Some((best, a)) => {
            StageValue::fraction(stage, Fraction::new(best as u64, f.num_clauses() as u64), "max-sat", Some(a))
        }
        None => StageValue::skipped(stage, format!("more than {} clauses must be violated", budget.max_violated)),
    })
}

fn correlation_value(l: &EdgeLabeling, hint: Option<&Clustering>, budget: &VerifyBudget) -> Result<StageValue> {
    let stage = Stage::Correlation;
    let baseline = l.num_positive() as i64 - l.n() as i64;
    let max_degree = (0..l.n()).map(|v| l.positive_degree(v)).max().unwrap_or(0);
    let mut out = StageValue::skipped(stage, String::new());
    if max_degree <= MAX_DEGREE {
        match certify_with_hint(l, hint)?.verdict {
            SlackVerdict::Baseline { .. } => {
                (out.perfect, out.excess, out.method) = (Some(true), Some(0), "slack certificate".into());
                return Ok(out);
            }
            SlackVerdict::AboveBaseline { lower_bound } => {
                (out.perfect, out.excess, out.method) =
                    (Some(false), Some(lower_bound as i64 - baseline), "slack certificate (lower bound)".into());
                return Ok(out);
            }
            SlackVerdict::Inconclusive { .. } => {}
        }
    }
    if l.n() <= budget.limits.max_partition_vertices {
        let (opt, _) = opt_min_disagree_with(l, l.n(), &budget.limits)?;
        let excess = opt as i64 - baseline;
        (out.perfect, out.excess, out.method) = (Some(excess == 0), Some(excess), "partition enumeration".into());
    } else {
        out.method = "instance too large for the exact solvers".into();
    }
    Ok(out)
}

fn stage_value(a: &Artifact, hint: Option<&Clustering>, budget: &VerifyBudget) -> Result<StageValue> {
    match a {
        Artifact::E3sat(f) => cnf_value(f, budget),
        Artifact::Nae6sat(f) | Artifact::Nae3sat(f) | Artifact::Monotone(f) => nae_value(a.stage(), f, budget),
        Artifact::Hypergraph(h) => {
            let mut v = nae_value(Stage::Hypergraph, &hypergraph_formula(h)?, budget)?;
            if v.perfect == Some(true) {
                v.witness = two_coloring(h)?;
            }
            Ok(v)
        }
        Artifact::Correlation { labeling, .. } => correlation_value(labeling, hint, budget),
    }
}

fn nae_holds(vals: impl Iterator<Item = bool>) -> bool {
    let mut seen = [false; 2];
    for v in vals {
        seen[usize::from(v)] = true;
    }
    seen[0] && seen[1]
}

/// Runs `pred` on every assignment of the variables occurring in `clauses`
/// (at most 16 of them); `None` if there are more.
fn for_all_local(clauses: &[&Clause], pred: impl Fn(&dyn Fn(Literal) -> bool) -> bool) -> Option<bool> {
    let mut index = BTreeMap::new();
    for l in clauses.iter().flat_map(|c| c.iter()) {
        let next = index.len();
        index.entry(l.var).or_insert(next);
    }
    if index.len() > 16 {
        return None;
    }
    Some((0..1u32 << index.len()).all(|bits| {
        let eval = |l: Literal| (bits >> index[&l.var] & 1 == 1) != l.negated;
        pred(&eval)
    }))
}

fn clause_nae(c: &Clause, eval: &dyn Fn(Literal) -> bool) -> bool {
    nae_holds(c.iter().map(|&l| eval(l)))
}

fn local_check(
    name: &str,
    units: usize,
    mut check: impl FnMut(usize) -> Option<bool>,
) -> PropertyCheck {
    let mut skipped = 0;
    for i in 0..units {
        match check(i) {
            Some(true) => {}
            Some(false) => return PropertyCheck::of(name, false, format!("fails on unit {}", i + 1)),
            None => skipped += 1,
        }
    }
    if skipped > 0 {
        PropertyCheck::new(name, CheckStatus::Skipped, format!("{skipped} of {units} units too large"))
    } else {
        PropertyCheck::of(name, true, format!("{units} units"))
    }
}

/// Every 4-set of a NAE6 output keeps at least 3 of its clauses, and an
/// unsatisfied source clause leaves at least one of them unsatisfied.
fn four_set_floor(up: &CnfFormula, down: &NaeFormula) -> PropertyCheck {
    let name = "4-set floor";
    if down.num_clauses() != 4 * up.num_clauses() {
        return PropertyCheck::of(name, false, "clause count does not split into 4-sets");
    }
    local_check(name, up.num_clauses(), |i| {
        let set: Vec<&Clause> = down.clauses()[4 * i..4 * i + 4].iter().collect();
        // source variable x is encoded as y != z
        let src = &up.clauses()[i];
        let mut all = set.clone();
        let pairs: Vec<Clause> =
            src.iter().map(|l| vec![Literal::pos(2 * l.var), Literal::pos(2 * l.var + 1)]).collect();
        all.extend(pairs.iter());
        for_all_local(&all, |eval| {
            let sat = set.iter().filter(|c| clause_nae(c, eval)).count();
            let src_sat = src.iter().any(|l| {
                let x = eval(Literal::pos(2 * l.var)) != eval(Literal::pos(2 * l.var + 1));
                x != l.negated
            });
            sat >= 3 && (src_sat || sat < 4)
        })
    })
}

/// A 4-set of a NAE3 output with all clauses satisfied satisfies its source.
fn four_set_soundness(up: &NaeFormula, down: &NaeFormula) -> PropertyCheck {
    let name = "4-set soundness";
    if down.num_clauses() != 4 * up.num_clauses() {
        return PropertyCheck::of(name, false, "clause count does not split into 4-sets");
    }
    local_check(name, up.num_clauses(), |i| {
        let src = &up.clauses()[i];
        let mut all: Vec<&Clause> = down.clauses()[4 * i..4 * i + 4].iter().collect();
        all.push(src);
        for_all_local(&all, |eval| !all[..4].iter().all(|c| clause_nae(c, eval)) || clause_nae(src, eval))
    })
}

/// Every variable gadget with all four clauses satisfied splits `y_i != z_i`.
fn gadget_split(up: &NaeFormula, down: &NaeFormula) -> PropertyCheck {
    let name = "gadget forces y != z";
    let (n, m, d) = (up.num_vars(), up.num_clauses(), up.max_occurrence());
    if down.num_clauses() != m + 4 * d * n {
        return PropertyCheck::of(name, false, "clause count does not match the gadget layout");
    }
    local_check(name, n * d, |g| {
        let i = g / d;
        let set: Vec<&Clause> = down.clauses()[m + 4 * g..m + 4 * g + 4].iter().collect();
        let (y, z) = (Literal::pos(2 * i), Literal::pos(2 * i + 1));
        let pair = vec![y, z];
        let mut all = set.clone();
        all.push(&pair);
        for_all_local(&all, |eval| !set.iter().all(|c| clause_nae(c, eval)) || eval(y) != eval(z))
    })
}

fn satisfied(a: &Artifact, x: &[bool]) -> Option<usize> {
    match a {
        Artifact::E3sat(f) => Some(f.clauses().iter().filter(|c| CnfFormula::clause_satisfied(c, x)).count()),
        Artifact::Nae6sat(f) | Artifact::Nae3sat(f) | Artifact::Monotone(f) => {
            Some(f.clauses().iter().filter(|c| NaeFormula::clause_satisfied(c, x)).count())
        }
        Artifact::Hypergraph(h) => Some(h.bichromatic_count(x)),
        Artifact::Correlation { .. } => None,
    }
}

fn num_vars(a: &Artifact) -> usize {
    a.sizes().n
}

/// `1 - val(up, pull(a)) <= 4 (1 - val(down, a))` for every (or a sample of)
/// downstream assignment `a`.
fn pullback_bound(up: &Artifact, down: &Artifact, budget: &VerifyBudget) -> Result<PropertyCheck> {
    let name = "pullback bound";
    let (m_up, m_down) = (up.sizes().m as u64, down.sizes().m as u64);
    let nv = num_vars(down);
    let check = |a: &[bool]| -> Result<bool> {
        let pulled = pull_back(up, a)?;
        let un_up = m_up - satisfied(up, &pulled).unwrap_or(0) as u64;
        let un_down = m_down - satisfied(down, a).unwrap_or(0) as u64;
        // (un_up / m_up) <= 4 (un_down / m_down)
        Ok(un_up * m_down <= 4 * un_down * m_up)
    };
    if nv <= budget.pullback_enumeration_vars {
        for bits in 0..1u64 << nv {
            let a: Vec<bool> = (0..nv).map(|i| bits >> i & 1 == 1).collect();
            if !check(&a)? {
                return Ok(PropertyCheck::of(name, false, format!("fails on assignment {bits:#x}")));
            }
        }
        return Ok(PropertyCheck::of(name, true, format!("all {} assignments", 1u64 << nv)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for s in 0..budget.pullback_samples {
        let a: Vec<bool> = (0..nv).map(|_| rng.gen()).collect();
        if !check(&a)? {
            return Ok(PropertyCheck::of(name, false, format!("fails on sampled assignment {s}")));
        }
    }
    Ok(PropertyCheck::of(name, true, format!("{} sampled assignments", budget.pullback_samples)))
}

fn thresholds(up: &Artifact, eps: f64) -> Option<(f64, f64)> {
    match up.stage() {
        Stage::E3sat | Stage::Nae6sat => Some((1.0 - eps / 4.0, 1.0 - eps)),
        Stage::Nae3sat => Some((1.0 - eps / (1.0 + 12.0 * up.sizes().d as f64), 1.0 - eps)),
        Stage::Monotone => Some((1.0 - eps, 1.0 - eps)),
        _ => None,
    }
}

fn gap_checks(up: &Artifact, vu: &StageValue, vd: &StageValue, budget: &VerifyBudget) -> Vec<GapCheck> {
    budget
        .epsilons
        .iter()
        .filter_map(|&eps| {
            let (t_down, t_up) = thresholds(up, eps)?;
            let status = match (vd.value, vu.value) {
                (Some(d), Some(u)) => {
                    let violated = d.at_least_one_minus(1.0 - t_down) && !u.at_least_one_minus(1.0 - t_up);
                    CheckStatus::from_bool(!violated)
                }
                _ => CheckStatus::Skipped,
            };
            Some(GapCheck { epsilon: eps, t_down, t_up, downstream: vd.value, upstream: vu.value, status })
        })
        .collect()
}

fn implication(name: &str, premise: Option<bool>, conclusion: Option<bool>, what: &str) -> PropertyCheck {
    match (premise, conclusion) {
        (Some(false), _) => PropertyCheck::of(name, true, "premise does not hold"),
        (Some(true), Some(c)) => PropertyCheck::of(name, c, what.to_string()),
        _ => PropertyCheck::new(name, CheckStatus::Skipped, "value not computed"),
    }
}

fn check_step(
    up: &Artifact,
    down: &Artifact,
    vu: &StageValue,
    vd: &StageValue,
    budget: &VerifyBudget,
) -> Result<StageReport> {
    let mut checks = Vec::new();
    let rebuilt = reduce_once(up);
    let built_ok = matches!(&rebuilt, Ok((a, _)) if a == down);
    checks.push(PropertyCheck::of(
        "construction",
        built_ok,
        match &rebuilt {
            Err(e) => format!("upstream does not reduce: {e}"),
            Ok(_) if built_ok => "downstream equals the reduction of upstream".into(),
            Ok(_) => "downstream differs from the reduction of upstream".into(),
        },
    ));

    let (us, ds) = (up.sizes(), down.sizes());
    if let Some((clauses, occ)) = expected_counts(up.stage(), us) {
        checks.push(PropertyCheck::of("clause count", ds.m == clauses, format!("{} clauses, expected {clauses}", ds.m)));
        checks.push(PropertyCheck::of("occurrence bound", ds.d <= occ, format!("max occurrence {}, bound {occ}", ds.d)));
    } else if let Artifact::Correlation { labeling, .. } = down {
        let four = (0..labeling.n()).all(|v| labeling.positive_degree(v) == 4);
        checks.push(PropertyCheck::of(
            "M = 2N",
            labeling.num_positive() == 2 * labeling.n() && four,
            format!("N = {}, M = {}, all degrees 4: {four}", labeling.n(), labeling.num_positive()),
        ));
    }

    checks.push(implication("value one forward", vu.perfect, vd.perfect, "downstream optimum is perfect"));
    checks.push(implication("value one backward", vd.perfect, vu.perfect, "upstream optimum is perfect"));

    // completeness map on a witness
    match (&vu.witness, vu.perfect) {
        (Some(w), Some(true)) => {
            let ok = match (up, down) {
                (Artifact::Hypergraph(h), Artifact::Correlation { labeling, .. }) => {
                    match coloring_to_clustering(h, w) {
                        Ok(c) if c.n() == labeling.n() => {
                            labeling.disagreement_cost(&c)? as i64 == labeling.num_positive() as i64 - labeling.n() as i64
                        }
                        _ => false,
                    }
                }
                _ => match extend_assignment(up, w) {
                    Ok(x) if x.len() == num_vars(down) => satisfied(down, &x) == Some(ds.m),
                    _ => false,
                },
            };
            checks.push(PropertyCheck::of("completeness map", ok, "image of a satisfying witness"));
        }
        (_, Some(false)) => checks.push(PropertyCheck::of("completeness map", true, "premise does not hold")),
        _ => checks.push(PropertyCheck::new("completeness map", CheckStatus::Skipped, "no satisfying witness")),
    }

    match (up, down) {
        (Artifact::E3sat(f), Artifact::Nae6sat(g)) => {
            checks.push(four_set_floor(f, g));
            checks.push(pullback_or_fail(up, down, budget)?);
        }
        (Artifact::Nae6sat(f), Artifact::Nae3sat(g)) => {
            checks.push(four_set_soundness(f, g));
            checks.push(pullback_or_fail(up, down, budget)?);
        }
        (Artifact::Nae3sat(f), Artifact::Monotone(g)) => checks.push(gadget_split(f, g)),
        (Artifact::Monotone(_), Artifact::Hypergraph(_)) => {
            let check = match (vu.value, vd.value) {
                (Some(a), Some(b)) => PropertyCheck::of("fraction exact", a == b, format!("{a} vs {b}")),
                _ => PropertyCheck::new("fraction exact", CheckStatus::Skipped, "value not computed"),
            };
            checks.push(check);
        }
        (Artifact::Hypergraph(_), Artifact::Correlation { .. }) => {
            let detail = match vd.excess {
                Some(x) => format!("optimal cost exceeds M - N by {}{x}", if vd.perfect == Some(false) { ">= " } else { "" }),
                None => "cost not computed".into(),
            };
            checks.push(match (vu.perfect, vd.perfect) {
                (Some(false), Some(p)) => PropertyCheck::of("strict gap", !p, detail),
                (Some(true), _) => PropertyCheck::of("strict gap", true, "hypergraph is 2-colourable"),
                _ => PropertyCheck::new("strict gap", CheckStatus::Skipped, detail),
            });
        }
        _ => {}
    }

    Ok(StageReport { from: up.stage(), to: down.stage(), checks, gaps: gap_checks(up, vu, vd, budget) })
}

// a malformed downstream makes the pullback itself fail; report that as a
// failed property rather than an error
fn pullback_or_fail(up: &Artifact, down: &Artifact, budget: &VerifyBudget) -> Result<PropertyCheck> {
    if expected_vars(up) != num_vars(down) {
        return Ok(PropertyCheck::of("pullback bound", false, "downstream variable count does not match"));
    }
    pullback_bound(up, down, budget)
}

fn expected_vars(up: &Artifact) -> usize {
    match up {
        Artifact::E3sat(f) => 2 * f.num_vars(),
        Artifact::Nae6sat(f) => f.num_vars() + 3 * f.num_clauses(),
        _ => num_vars(up),
    }
}
