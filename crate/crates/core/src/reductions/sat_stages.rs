use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, Hypergraph3, Literal, NaeFormula};

use super::{Artifact, Sizes, Stage, StageTrace};

fn trace(from: &Artifact, to: &Artifact, names: Vec<String>) -> StageTrace {
    StageTrace {
        from: from.stage(),
        to: to.stage(),
        input: from.sizes(),
        output: to.sizes(),
        output_names: names,
        cluster_bound: None,
    }
}

pub(super) fn check_len(n: usize, assignment: &[bool]) -> Result<()> {
    if assignment.len() != n {
        return Err(Error::SizeMismatch { expected: n, got: assignment.len() });
    }
    Ok(())
}

/// `x_i` becomes the pair `(y_i, z_i) = (2i, 2i + 1)` with `x_i = 1` iff
/// `y_i != z_i`. Each clause `(l_i, l_j, l_k)` yields four 6-clauses over the
/// pairs `(p, q)`, where `p = y` and `q = z` for a positive literal and
/// `q = !z` for a negative one.
pub fn e3sat_to_nae6sat(psi: &CnfFormula) -> Result<(NaeFormula, StageTrace)> {
    if psi.arity() != 3 {
        return Err(Error::InvalidInput(format!("E3-SAT clauses have 3 literals, got arity {}", psi.arity())));
    }
    if let Some(i) = psi.clauses().iter().position(|c| !distinct(c)) {
        return Err(Error::InvalidInput(format!("clause {i} repeats a variable")));
    }
    let pair = |l: Literal| -> [Literal; 2] {
        let y = Literal::pos(2 * l.var);
        let z = Literal { var: 2 * l.var + 1, negated: l.negated };
        [y, z]
    };
    let mut clauses = Vec::with_capacity(4 * psi.num_clauses());
    for c in psi.clauses() {
        let [pi, qi] = pair(c[0]);
        let [pj, qj] = pair(c[1]);
        let [pk, qk] = pair(c[2]);
        for (flip_j, flip_k) in [(false, false), (false, true), (true, false), (true, true)] {
            let fj = |l: Literal| if flip_j { l.negate() } else { l };
            let fk = |l: Literal| if flip_k { l.negate() } else { l };
            clauses.push(vec![pi, qi, fj(pj), fj(qj), fk(pk), fk(qk)]);
        }
    }
    let phi = NaeFormula::new(2 * psi.num_vars(), 6, clauses)?;
    let names = (0..psi.num_vars()).flat_map(|i| [format!("y{}", i + 1), format!("z{}", i + 1)]).collect();
    let t = trace(&Artifact::E3sat(psi.clone()), &Artifact::Nae6sat(phi.clone()), names);
    Ok((phi, t))
}

fn distinct(c: &Clause) -> bool {
    (0..c.len()).all(|i| (i + 1..c.len()).all(|j| c[i].var != c[j].var))
}

pub(super) fn extend_e3(psi: &CnfFormula, x: &[bool]) -> Result<Vec<bool>> {
    check_len(psi.num_vars(), x)?;
    Ok(x.iter().flat_map(|&xi| [false, xi]).collect())
}

pub(super) fn pull_e3(psi: &CnfFormula, a: &[bool]) -> Result<Vec<bool>> {
    check_len(2 * psi.num_vars(), a)?;
    Ok((0..psi.num_vars()).map(|i| a[2 * i] != a[2 * i + 1]).collect())
}

/// Each 6-clause `(a, b, c, d, e, f)` becomes `(a, b, x)`, `(!x, c, y)`,
/// `(!y, d, z)`, `(!z, e, f)` with fresh `x, y, z` numbered `n + 3i`,
/// `n + 3i + 1`, `n + 3i + 2` for clause `i`.
pub fn nae6sat_to_nae3sat(psi: &NaeFormula) -> Result<(NaeFormula, StageTrace)> {
    if psi.arity() != 6 {
        return Err(Error::InvalidInput(format!("expected a NAE6 formula, got arity {}", psi.arity())));
    }
    let n = psi.num_vars();
    let mut clauses = Vec::with_capacity(4 * psi.num_clauses());
    for (i, c) in psi.clauses().iter().enumerate() {
        let x = Literal::pos(n + 3 * i);
        let y = Literal::pos(n + 3 * i + 1);
        let z = Literal::pos(n + 3 * i + 2);
        clauses.push(vec![c[0], c[1], x]);
        clauses.push(vec![x.negate(), c[2], y]);
        clauses.push(vec![y.negate(), c[3], z]);
        clauses.push(vec![z.negate(), c[4], c[5]]);
    }
    let phi = NaeFormula::new(n + 3 * psi.num_clauses(), 3, clauses)?;
    let mut names: Vec<String> = (0..n).map(|v| format!("v{}", v + 1)).collect();
    for i in 0..psi.num_clauses() {
        names.extend(["x", "y", "z"].map(|s| format!("{s}.c{}", i + 1)));
    }
    let t = trace(&Artifact::Nae6sat(psi.clone()), &Artifact::Nae3sat(phi.clone()), names);
    Ok((phi, t))
}

/// Values for the fresh `x, y, z` of one 4-set satisfying all four clauses,
/// if any exist.
fn fresh_for_clause(c: &Clause, a: &[bool]) -> Option<[bool; 3]> {
    let v: Vec<bool> = c.iter().map(|l| l.eval(a)).collect();
    let nae = |p: bool, q: bool, r: bool| !(p == q && q == r);
    (0..8u8).map(|b| [b & 1 == 1, b & 2 == 2, b & 4 == 4]).find(|&[x, y, z]| {
        nae(v[0], v[1], x) && nae(!x, v[2], y) && nae(!y, v[3], z) && nae(!z, v[4], v[5])
    })
}

pub(super) fn extend_nae6(psi: &NaeFormula, a: &[bool]) -> Result<Vec<bool>> {
    check_len(psi.num_vars(), a)?;
    let mut out = a.to_vec();
    for c in psi.clauses() {
        out.extend(fresh_for_clause(c, a).unwrap_or([false; 3]));
    }
    Ok(out)
}

pub(super) fn pull_nae6(psi: &NaeFormula, a: &[bool]) -> Result<Vec<bool>> {
    check_len(psi.num_vars() + 3 * psi.num_clauses(), a)?;
    Ok(a[..psi.num_vars()].to_vec())
}

/// Positive literals of `x_i` become `y_i = 2i`, negative ones `z_i = 2i + 1`.
/// For every variable and `j < d` the gadget `(y, z, t)`, `(y, z, u)`,
/// `(y, z, v)`, `(t, u, v)` is added, with `t, u, v` numbered from `2n` on.
pub fn nae3sat_to_monotone(psi: &NaeFormula) -> Result<(NaeFormula, StageTrace)> {
    if psi.arity() != 3 {
        return Err(Error::InvalidInput(format!("expected a NAE3 formula, got arity {}", psi.arity())));
    }
    let n = psi.num_vars();
    let d = psi.max_occurrence();
    let mut clauses: Vec<Clause> = psi
        .clauses()
        .iter()
        .map(|c| c.iter().map(|l| Literal::pos(2 * l.var + usize::from(l.negated))).collect())
        .collect();
    for i in 0..n {
        let (y, z) = (Literal::pos(2 * i), Literal::pos(2 * i + 1));
        for j in 0..d {
            let base = 2 * n + 3 * (d * i + j);
            let (t, u, v) = (Literal::pos(base), Literal::pos(base + 1), Literal::pos(base + 2));
            clauses.extend([vec![y, z, t], vec![y, z, u], vec![y, z, v], vec![t, u, v]]);
        }
    }
    let phi = NaeFormula::new(2 * n + 3 * d * n, 3, clauses)?;
    let mut names: Vec<String> = (0..n).flat_map(|i| [format!("y{}", i + 1), format!("z{}", i + 1)]).collect();
    for i in 0..n {
        for j in 0..d {
            names.extend(["t", "u", "v"].map(|s| format!("{s}{}.{}", i + 1, j + 1)));
        }
    }
    let t = trace(&Artifact::Nae3sat(psi.clone()), &Artifact::Monotone(phi.clone()), names);
    Ok((phi, t))
}

pub(super) fn extend_nae3(psi: &NaeFormula, a: &[bool]) -> Result<Vec<bool>> {
    check_len(psi.num_vars(), a)?;
    let n = psi.num_vars();
    let d = psi.max_occurrence();
    let mut out: Vec<bool> = a.iter().flat_map(|&x| [x, !x]).collect();
    out.extend(std::iter::repeat([true, false, false]).take(n * d).flatten());
    Ok(out)
}

pub(super) fn pull_nae3(psi: &NaeFormula, a: &[bool]) -> Result<Vec<bool>> {
    let n = psi.num_vars();
    check_len(2 * n + 3 * psi.max_occurrence() * n, a)?;
    Ok((0..n).map(|i| a[2 * i]).collect())
}

/// One vertex per variable and one hyperedge per clause.
pub fn monotone_to_hypergraph(psi: &NaeFormula) -> Result<(Hypergraph3, StageTrace)> {
    if psi.arity() != 3 || !psi.is_monotone() {
        return Err(Error::InvalidInput("expected a monotone NAE3 formula".into()));
    }
    if let Some(i) = psi.clauses().iter().position(|c| !distinct(c)) {
        return Err(Error::InvalidInput(format!(
            "clause {} repeats a variable and cannot form a 3-element hyperedge",
            i + 1
        )));
    }
    let edges = psi.clauses().iter().map(|c| [c[0].var, c[1].var, c[2].var]).collect();
    let h = Hypergraph3::new(psi.num_vars(), edges)?;
    let names = (0..psi.num_vars()).map(|v| format!("v{}", v + 1)).collect();
    let t = trace(&Artifact::Monotone(psi.clone()), &Artifact::Hypergraph(h.clone()), names);
    Ok((h, t))
}

/// Expected output sizes of one step as stated by the lemmas: clause counts
/// `4m`, `4m`, `m + 4dn`, `m` and `M = 2N`, with occurrence bounds `4d`,
/// `max(d, 2)`, `4d` and `d`.
pub(super) fn expected_counts(from: Stage, input: Sizes) -> Option<(usize, usize)> {
    let Sizes { n, m, d } = input;
    match from {
        Stage::E3sat => Some((4 * m, 4 * d)),
        Stage::Nae6sat => Some((4 * m, d.max(2))),
        Stage::Nae3sat => Some((m + 4 * d * n, 4 * d)),
        Stage::Monotone => Some((m, d)),
        _ => None,
    }
}
