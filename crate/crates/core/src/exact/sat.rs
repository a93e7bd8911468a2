//! Complete satisfiability deciders for instances too large to enumerate.
//!
//! These wrap a CDCL solver. Every returned witness is re-checked against the
//! original object before it leaves this module.

use varisat::{ExtendFormula, Lit, Solver};

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, Hypergraph3, Literal, NaeFormula};

fn lit(l: Literal) -> Lit {
    Lit::from_index(l.var, !l.negated)
}

fn solve(num_vars: usize, clauses: impl IntoIterator<Item = Vec<Lit>>) -> Result<Option<Vec<bool>>> {
    let mut solver = Solver::new();
    for clause in clauses {
        solver.add_clause(&clause);
    }
    let sat = solver.solve().map_err(|e| Error::InvalidInput(format!("sat solver: {e}")))?;
    if !sat {
        return Ok(None);
    }
    let mut assignment = vec![false; num_vars];
    for l in solver.model().unwrap_or_default() {
        if l.index() < num_vars {
            assignment[l.index()] = l.is_positive();
        }
    }
    Ok(Some(assignment))
}

fn nae_clauses(clause: &Clause) -> [Vec<Lit>; 2] {
    let some_true = clause.iter().map(|&l| lit(l)).collect();
    let some_false = clause.iter().map(|&l| !lit(l)).collect();
    [some_true, some_false]
}

/// A satisfying assignment, or `None` if the formula is unsatisfiable.
pub fn cnf_satisfiable(formula: &CnfFormula) -> Result<Option<Vec<bool>>> {
    let clauses = formula.clauses().iter().map(|c| c.iter().map(|&l| lit(l)).collect());
    let model = solve(formula.num_vars(), clauses)?;
    if let Some(a) = &model {
        debug_assert_eq!(formula.satisfied_count(a), formula.num_clauses());
    }
    Ok(model)
}

/// An assignment leaving no clause with all literals equal, if one exists.
pub fn nae_satisfiable(formula: &NaeFormula) -> Result<Option<Vec<bool>>> {
    let clauses = formula.clauses().iter().flat_map(nae_clauses);
    let model = solve(formula.num_vars(), clauses)?;
    if let Some(a) = &model {
        debug_assert_eq!(formula.satisfied_count(a), formula.num_clauses());
    }
    Ok(model)
}

/// A 2-colouring with no monochromatic hyperedge, if one exists.
pub fn two_coloring(h: &Hypergraph3) -> Result<Option<Vec<bool>>> {
    let clauses = h.edges().iter().flat_map(|e| {
        let c: Clause = e.iter().map(|&v| Literal::pos(v)).collect();
        nae_clauses(&c)
    });
    let model = solve(h.num_vertices(), clauses)?;
    if let Some(c) = &model {
        debug_assert_eq!(h.bichromatic_count(c), h.num_edges());
    }
    Ok(model)
}

/// Adds `sum(relax) <= bound` as a sequential counter over fresh variables
/// starting at `next_var`.
fn at_most(relax: &[Lit], bound: usize, next_var: usize, clauses: &mut Vec<Vec<Lit>>) {
    if bound == 0 {
        clauses.extend(relax.iter().map(|&r| vec![!r]));
        return;
    }
    let n = relax.len();
    if n <= bound {
        return;
    }
    // s(i, j): at least j + 1 of relax[0..=i] are true
    let s = |i: usize, j: usize| Lit::from_index(next_var + i * bound + j, true);
    for i in 0..n {
        clauses.push(vec![!relax[i], s(i, 0)]);
        if i > 0 {
            for j in 0..bound {
                clauses.push(vec![!s(i - 1, j), s(i, j)]);
            }
            for j in 1..bound {
                clauses.push(vec![!relax[i], !s(i - 1, j - 1), s(i, j)]);
            }
            clauses.push(vec![!relax[i], !s(i - 1, bound - 1)]);
        }
    }
}

/// Smallest number of violated constraints, searching upwards from zero.
/// Constraint `c` is the CNF clause list `groups[c]`; relaxing it frees all
/// of its clauses at once.
fn min_violated(num_vars: usize, groups: &[Vec<Vec<Lit>>], max_violated: usize) -> Result<Option<(usize, Vec<bool>)>> {
    let m = groups.len();
    for bound in 0..=m.min(max_violated) {
        let relax: Vec<Lit> = (0..m).map(|c| Lit::from_index(num_vars + c, true)).collect();
        let mut clauses = Vec::new();
        for (c, group) in groups.iter().enumerate() {
            for clause in group {
                let mut clause = clause.clone();
                clause.push(relax[c]);
                clauses.push(clause);
            }
        }
        at_most(&relax, bound, num_vars + m, &mut clauses);
        if let Some(a) = solve(num_vars, clauses)? {
            return Ok(Some((bound, a)));
        }
    }
    Ok(None)
}

/// Exact maximum number of clauses satisfiable at once, with a maximising
/// assignment. `None` if more than `max_violated` clauses must be violated.
pub fn max_cnf_satisfied(formula: &CnfFormula, max_violated: usize) -> Result<Option<(usize, Vec<bool>)>> {
    let groups: Vec<Vec<Vec<Lit>>> =
        formula.clauses().iter().map(|c| vec![c.iter().map(|&l| lit(l)).collect()]).collect();
    Ok(min_violated(formula.num_vars(), &groups, max_violated)?.map(|(v, a)| (formula.num_clauses() - v, a)))
}

/// Exact maximum number of NAE-satisfiable clauses, with a maximising
/// assignment. `None` if more than `max_violated` clauses must be violated.
pub fn max_nae_satisfied(formula: &NaeFormula, max_violated: usize) -> Result<Option<(usize, Vec<bool>)>> {
    let groups: Vec<Vec<Vec<Lit>>> = formula.clauses().iter().map(|c| nae_clauses(c).to_vec()).collect();
    Ok(min_violated(formula.num_vars(), &groups, max_violated)?.map(|(v, a)| (formula.num_clauses() - v, a)))
}

/// Indices of a subfamily of `sets` covering every element of `0..universe`
/// exactly once, if one exists.
pub fn exact_cover(universe: usize, sets: &[Vec<usize>]) -> Result<Option<Vec<usize>>> {
    let mut containing = vec![Vec::new(); universe];
    for (i, s) in sets.iter().enumerate() {
        for &x in s {
            if x >= universe {
                return Err(Error::InvalidInput(format!("set element {x} outside universe of size {universe}")));
            }
            containing[x].push(i);
        }
    }
    if containing.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut clauses = Vec::new();
    for owners in &containing {
        clauses.push(owners.iter().map(|&i| Lit::from_index(i, true)).collect());
        for (a, &i) in owners.iter().enumerate() {
            for &j in &owners[a + 1..] {
                clauses.push(vec![Lit::from_index(i, false), Lit::from_index(j, false)]);
            }
        }
    }
    let Some(chosen) = solve(sets.len(), clauses)? else {
        return Ok(None);
    };
    let picked: Vec<usize> = (0..sets.len()).filter(|&i| chosen[i]).collect();
    let mut hits = vec![0u32; universe];
    for &i in &picked {
        for &x in &sets[i] {
            hits[x] += 1;
        }
    }
    if hits.iter().any(|&h| h != 1) {
        return Err(Error::InvalidInput("sat solver returned an invalid cover".into()));
    }
    Ok(Some(picked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{is_2_colorable, max_val, max_val_nae};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_clause(rng: &mut ChaCha8Rng, n: usize, arity: usize) -> Clause {
        (0..arity)
            .map(|_| Literal { var: rng.gen_range(0..n), negated: rng.gen_bool(0.5) })
            .collect()
    }

    #[test]
    fn agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=7);
            let m = rng.gen_range(0..=14);
            let clauses: Vec<Clause> = (0..m).map(|_| random_clause(&mut rng, n, 3)).collect();
            let cnf = CnfFormula::new(n, 3, clauses.clone()).unwrap();
            let nae = NaeFormula::new(n, 3, clauses).unwrap();
            assert_eq!(cnf_satisfiable(&cnf).unwrap().is_some(), max_val(&cnf).unwrap().is_one());
            assert_eq!(nae_satisfiable(&nae).unwrap().is_some(), max_val_nae(&nae).unwrap().is_one());
            if let Some(a) = nae_satisfiable(&nae).unwrap() {
                assert_eq!(nae.satisfied_count(&a), nae.num_clauses());
            }
        }
    }

    #[test]
    fn max_satisfied_agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..150 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(0..=20);
            let clauses: Vec<Clause> = (0..m).map(|_| random_clause(&mut rng, n, 3)).collect();
            let cnf = CnfFormula::new(n, 3, clauses.clone()).unwrap();
            let nae = NaeFormula::new(n, 3, clauses).unwrap();
            let (best, a) = max_cnf_satisfied(&cnf, m).unwrap().unwrap();
            assert_eq!(crate::exact::Fraction::new(best as u64, m as u64), max_val(&cnf).unwrap());
            assert_eq!(cnf.satisfied_count(&a), best);
            let (best, a) = max_nae_satisfied(&nae, m).unwrap().unwrap();
            assert_eq!(crate::exact::Fraction::new(best as u64, m as u64), max_val_nae(&nae).unwrap());
            assert_eq!(nae.satisfied_count(&a), best);
        }
        let fano = Hypergraph3::fano();
        let clauses = fano.edges().iter().map(|e| e.iter().map(|&v| Literal::pos(v)).collect()).collect();
        let f = NaeFormula::new(7, 3, clauses).unwrap();
        assert_eq!(max_nae_satisfied(&f, 7).unwrap().unwrap().0, 6);
        assert!(max_nae_satisfied(&f, 0).unwrap().is_none());
    }

    #[test]
    fn fano_has_no_coloring() {
        assert!(two_coloring(&Hypergraph3::fano()).unwrap().is_none());
        let mut edges = Hypergraph3::fano().edges().to_vec();
        edges.pop();
        let h = Hypergraph3::new(7, edges).unwrap();
        let c = two_coloring(&h).unwrap().unwrap();
        assert_eq!(h.bichromatic_count(&c), h.num_edges());
        assert!(is_2_colorable(&h).unwrap());
    }

    #[test]
    fn exact_cover_small() {
        let sets = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0]];
        let cover = exact_cover(4, &sets).unwrap().unwrap();
        let mut covered: Vec<usize> = cover.iter().flat_map(|&i| sets[i].clone()).collect();
        covered.sort();
        assert_eq!(covered, vec![0, 1, 2, 3]);
        assert!(exact_cover(3, &[vec![0, 1], vec![1, 2]]).unwrap().is_none());
    }
}
