//! Boolean formulas and 3-uniform hypergraphs, with their text formats.
//!
//! Variables are 0-indexed in memory and 1-indexed (signed) in the DIMACS
//! style files, where each clause line ends with `0`. Headers are
//! `p cnf n m`, `p nae3 n m`, `p nae6 n m` and `p h3 n m`; hypergraph edge
//! lines list three 0-indexed vertex ids.

use std::fmt;
use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Self { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Self { var, negated: true }
    }

    pub fn negate(self) -> Self {
        Self { var: self.var, negated: !self.negated }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }

    /// Evaluates against a bitmask assignment (bit `var` is the value).
    pub fn eval_bits(self, bits: u64) -> bool {
        ((bits >> self.var) & 1 == 1) != self.negated
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn from_dimacs(x: i64) -> Option<Self> {
        match x {
            0 => None,
            x if x > 0 => Some(Self::pos(x as usize - 1)),
            x => Some(Self::neg((-x) as usize - 1)),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var + 1)
        } else {
            write!(f, "x{}", self.var + 1)
        }
    }
}

pub type Clause = Vec<Literal>;

fn validate_clauses(num_vars: usize, arity: usize, clauses: &[Clause]) -> Result<()> {
    for (i, clause) in clauses.iter().enumerate() {
        if clause.len() != arity {
            return Err(Error::InvalidInput(format!(
                "clause {i} has {} literals, expected {arity}",
                clause.len()
            )));
        }
        if let Some(l) = clause.iter().find(|l| l.var >= num_vars) {
            return Err(Error::InvalidInput(format!("clause {i} uses variable {} of {num_vars}", l.var + 1)));
        }
    }
    Ok(())
}

/// Number of clauses each variable appears in (a variable repeated inside
/// one clause counts once).
fn occurrences(num_vars: usize, clauses: &[Clause]) -> Vec<usize> {
    let mut occ = vec![0; num_vars];
    for clause in clauses {
        let mut vars: Vec<usize> = clause.iter().map(|l| l.var).collect();
        vars.sort_unstable();
        vars.dedup();
        for v in vars {
            occ[v] += 1;
        }
    }
    occ
}

fn distinct_vars(clause: &Clause) -> bool {
    (0..clause.len()).all(|i| (i + 1..clause.len()).all(|j| clause[i].var != clause[j].var))
}

/// An ordinary CNF formula with a uniform clause width.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    num_vars: usize,
    arity: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, arity: usize, clauses: Vec<Clause>) -> Result<Self> {
        validate_clauses(num_vars, arity, &clauses)?;
        Ok(Self { num_vars, arity, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn occurrences(&self) -> Vec<usize> {
        occurrences(self.num_vars, &self.clauses)
    }

    /// Maximum number of clauses any variable appears in.
    pub fn max_occurrence(&self) -> usize {
        self.occurrences().into_iter().max().unwrap_or(0)
    }

    pub fn has_distinct_vars(&self) -> bool {
        self.clauses.iter().all(distinct_vars)
    }

    pub fn clause_satisfied(clause: &Clause, assignment: &[bool]) -> bool {
        clause.iter().any(|l| l.eval(assignment))
    }

    pub fn satisfied_count(&self, assignment: &[bool]) -> usize {
        self.clauses.iter().filter(|c| Self::clause_satisfied(c, assignment)).count()
    }

    pub fn to_dimacs(&self) -> String {
        write_dimacs("cnf", self.num_vars, &self.clauses)
    }

    pub fn from_dimacs(reader: impl BufRead) -> Result<Self> {
        let (kind, n, clauses) = read_dimacs(reader)?;
        if kind != "cnf" {
            return Err(Error::parse(1, format!("expected `p cnf` header, found `p {kind}`")));
        }
        let arity = clauses.first().map_or(3, Vec::len);
        CnfFormula::new(n, arity, clauses).map_err(|e| Error::parse(0, e.to_string()))
    }
}

/// A formula whose clauses are satisfied in the not-all-equal sense.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaeFormula {
    num_vars: usize,
    arity: usize,
    clauses: Vec<Clause>,
}

impl NaeFormula {
    pub fn new(num_vars: usize, arity: usize, clauses: Vec<Clause>) -> Result<Self> {
        if arity != 3 && arity != 6 {
            return Err(Error::InvalidInput(format!("NAE arity must be 3 or 6, got {arity}")));
        }
        validate_clauses(num_vars, arity, &clauses)?;
        Ok(Self { num_vars, arity, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// True when no literal is negated.
    pub fn is_monotone(&self) -> bool {
        self.clauses.iter().flatten().all(|l| !l.negated)
    }

    pub fn occurrences(&self) -> Vec<usize> {
        occurrences(self.num_vars, &self.clauses)
    }

    pub fn max_occurrence(&self) -> usize {
        self.occurrences().into_iter().max().unwrap_or(0)
    }

    pub fn has_distinct_vars(&self) -> bool {
        self.clauses.iter().all(distinct_vars)
    }

    /// Not all literal values equal.
    pub fn clause_satisfied(clause: &Clause, assignment: &[bool]) -> bool {
        let first = clause[0].eval(assignment);
        clause[1..].iter().any(|l| l.eval(assignment) != first)
    }

    pub fn satisfied_count(&self, assignment: &[bool]) -> usize {
        self.clauses.iter().filter(|c| Self::clause_satisfied(c, assignment)).count()
    }

    fn kind(&self) -> &'static str {
        if self.arity == 3 {
            "nae3"
        } else {
            "nae6"
        }
    }

    pub fn to_dimacs(&self) -> String {
        write_dimacs(self.kind(), self.num_vars, &self.clauses)
    }

    pub fn from_dimacs(reader: impl BufRead) -> Result<Self> {
        let (kind, n, clauses) = read_dimacs(reader)?;
        let arity = match kind.as_str() {
            "nae3" => 3,
            "nae6" => 6,
            other => return Err(Error::parse(1, format!("expected `p nae3` or `p nae6` header, found `p {other}`"))),
        };
        NaeFormula::new(n, arity, clauses).map_err(|e| Error::parse(0, e.to_string()))
    }
}

/// A 3-uniform hypergraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph3 {
    num_vertices: usize,
    edges: Vec<[usize; 3]>,
}

impl Hypergraph3 {
    pub fn new(num_vertices: usize, edges: Vec<[usize; 3]>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.iter().any(|&v| v >= num_vertices) {
                return Err(Error::InvalidInput(format!("edge {i} {e:?} out of range for {num_vertices} vertices")));
            }
            if e[0] == e[1] || e[0] == e[2] || e[1] == e[2] {
                return Err(Error::InvalidInput(format!("edge {i} {e:?} repeats a vertex")));
            }
        }
        Ok(Self { num_vertices, edges })
    }

    /// The Fano plane: 7 points, 7 lines, not 2-colourable.
    pub fn fano() -> Self {
        let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
        Self::new(7, lines.to_vec()).unwrap()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[[usize; 3]] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// An edge is bichromatic when its three vertices do not all share a colour.
    pub fn bichromatic_count(&self, coloring: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|e| !(coloring[e[0]] == coloring[e[1]] && coloring[e[1]] == coloring[e[2]]))
            .count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p h3 {} {}", self.num_vertices, self.edges.len()).unwrap();
        for e in &self.edges {
            writeln!(out, "{} {} {}", e[0], e[1], e[2]).unwrap();
        }
        out
    }

    pub fn from_text(reader: impl BufRead) -> Result<Self> {
        let mut header = None;
        let mut edges = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            let body = line.split('#').next().unwrap_or("");
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks.is_empty() || toks[0] == "c" {
                continue;
            }
            if toks[0] == "p" {
                if header.is_some() || toks.len() != 4 || toks[1] != "h3" {
                    return Err(Error::parse(lineno, "malformed header, expected `p h3 <n> <m>`"));
                }
                let n: usize = toks[2].parse().map_err(|_| Error::parse(lineno, "bad vertex count"))?;
                let m: usize = toks[3].parse().map_err(|_| Error::parse(lineno, "bad edge count"))?;
                header = Some((n, m));
                continue;
            }
            let (n, _) = header.ok_or_else(|| Error::parse(lineno, "missing `p h3` header"))?;
            if toks.len() != 3 {
                return Err(Error::parse(lineno, "expected three vertex ids"));
            }
            let mut e = [0; 3];
            for (slot, tok) in e.iter_mut().zip(&toks) {
                *slot = tok.parse().map_err(|_| Error::parse(lineno, format!("bad vertex id {tok:?}")))?;
                if *slot >= n {
                    return Err(Error::parse(lineno, format!("vertex {slot} out of range for n = {n}")));
                }
            }
            if e[0] == e[1] || e[0] == e[2] || e[1] == e[2] {
                return Err(Error::parse(lineno, "edge repeats a vertex"));
            }
            edges.push(e);
        }
        let (n, m) = header.ok_or_else(|| Error::parse(0, "empty hypergraph file"))?;
        if edges.len() != m {
            return Err(Error::parse(0, format!("header declares {m} edges, found {}", edges.len())));
        }
        Hypergraph3::new(n, edges)
    }
}

fn write_dimacs(kind: &str, num_vars: usize, clauses: &[Clause]) -> String {
    let mut out = String::new();
    writeln!(out, "p {kind} {num_vars} {}", clauses.len()).unwrap();
    for clause in clauses {
        for l in clause {
            write!(out, "{} ", l.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

fn read_dimacs(reader: impl BufRead) -> Result<(String, usize, Vec<Clause>)> {
    let mut header: Option<(String, usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if toks[0] == "p" {
            if header.is_some() || toks.len() != 4 {
                return Err(Error::parse(lineno, "malformed header, expected `p <kind> <vars> <clauses>`"));
            }
            let n = toks[2].parse().map_err(|_| Error::parse(lineno, "bad variable count"))?;
            let m = toks[3].parse().map_err(|_| Error::parse(lineno, "bad clause count"))?;
            header = Some((toks[1].to_string(), n, m));
            continue;
        }
        let (_, n, _) = header.as_ref().ok_or_else(|| Error::parse(lineno, "missing `p` header"))?;
        for tok in toks {
            let x: i64 = tok.parse().map_err(|_| Error::parse(lineno, format!("bad literal {tok:?}")))?;
            match Literal::from_dimacs(x) {
                None => clauses.push(std::mem::take(&mut current)),
                Some(l) if l.var >= *n => {
                    return Err(Error::parse(lineno, format!("variable {} out of range for {n} variables", l.var + 1)))
                }
                Some(l) => current.push(l),
            }
        }
    }
    let (kind, n, m) = header.ok_or_else(|| Error::parse(0, "empty formula file"))?;
    if !current.is_empty() {
        return Err(Error::parse(0, "last clause is not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(Error::parse(0, format!("header declares {m} clauses, found {}", clauses.len())));
    }
    Ok((kind, n, clauses))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        let f = CnfFormula::new(
            4,
            3,
            vec![vec![Literal::pos(0), Literal::neg(1), Literal::pos(3)], vec![Literal::neg(0), Literal::pos(1), Literal::pos(2)]],
        )
        .unwrap();
        let text = f.to_dimacs();
        assert_eq!(text, "p cnf 4 2\n1 -2 4 0\n-1 2 3 0\n");
        assert_eq!(CnfFormula::from_dimacs(text.as_bytes()).unwrap(), f);
        assert_eq!(f.max_occurrence(), 2);

        let nae = NaeFormula::new(3, 3, vec![vec![Literal::pos(0), Literal::pos(1), Literal::pos(2)]]).unwrap();
        assert!(nae.is_monotone());
        assert_eq!(NaeFormula::from_dimacs(nae.to_dimacs().as_bytes()).unwrap(), nae);
        assert!(CnfFormula::from_dimacs(nae.to_dimacs().as_bytes()).is_err());
    }

    #[test]
    fn dimacs_errors() {
        assert!(CnfFormula::from_dimacs("p cnf 2 1\n1 3 2 0\n".as_bytes()).is_err());
        assert!(CnfFormula::from_dimacs("p cnf 2 2\n1 -2 1 0\n".as_bytes()).is_err());
        assert!(CnfFormula::from_dimacs("1 2 0\n".as_bytes()).is_err());
    }

    #[test]
    fn hypergraph_text() {
        let h = Hypergraph3::fano();
        assert_eq!(h.max_degree(), 3);
        let back = Hypergraph3::from_text(h.to_text().as_bytes()).unwrap();
        assert_eq!(back, h);
        assert!(Hypergraph3::new(3, vec![[0, 0, 1]]).is_err());
        assert!(Hypergraph3::from_text("p h3 3 1\n0 1 3\n".as_bytes()).is_err());
    }

    #[test]
    fn nae_semantics() {
        let c = vec![Literal::pos(0), Literal::pos(1), Literal::pos(2)];
        assert!(!NaeFormula::clause_satisfied(&c, &[true, true, true]));
        assert!(NaeFormula::clause_satisfied(&c, &[true, false, true]));
        assert!(NaeFormula::clause_satisfied(&c, &[true, false, false]));
    }
}
