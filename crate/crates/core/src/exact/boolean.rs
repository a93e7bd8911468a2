use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, Hypergraph3, NaeFormula};

use super::ExactLimits;

/// An exact ratio `num / den` with `den > 0`. An empty formula has value 1/1.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        if den == 0 {
            Self { num: 1, den: 1 }
        } else {
            Self { num, den }
        }
    }

    pub fn one() -> Self {
        Self { num: 1, den: 1 }
    }

    pub fn is_one(self) -> bool {
        self.num == self.den
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `self >= 1 - eps`, decided without rounding the fraction first.
    pub fn at_least_one_minus(self, eps: f64) -> bool {
        (self.den - self.num) as f64 <= eps * self.den as f64 + 1e-9
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Fraction {}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

// literal masks of a clause over a bit-packed assignment
#[derive(Clone, Copy)]
struct Masks {
    pos: u64,
    neg: u64,
}

fn masks(clause: &Clause) -> Masks {
    let mut m = Masks { pos: 0, neg: 0 };
    for lit in clause {
        if lit.negated {
            m.neg |= 1 << lit.var;
        } else {
            m.pos |= 1 << lit.var;
        }
    }
    m
}

fn or_holds(m: Masks, bits: u64) -> bool {
    bits & m.pos != 0 || !bits & m.neg != 0
}

fn nae_holds(m: Masks, bits: u64) -> bool {
    let all_true = bits & m.pos == m.pos && !bits & m.neg == m.neg;
    let all_false = bits & m.pos == 0 && !bits & m.neg == 0;
    !(all_true || all_false)
}

fn check_vars(n: usize, limits: &ExactLimits) -> Result<()> {
    if n > limits.max_boolean_vars || n > 63 {
        return Err(Error::LimitExceeded { what: "assignment enumeration", size: n, limit: limits.max_boolean_vars });
    }
    Ok(())
}

fn check_assignment(n: usize, assignment: &[bool]) -> Result<()> {
    if assignment.len() != n {
        return Err(Error::SizeMismatch { expected: n, got: assignment.len() });
    }
    Ok(())
}

fn best_over_assignments(n: usize, all: &[Masks], holds: fn(Masks, u64) -> bool) -> u64 {
    let m = all.len() as u64;
    let mut best = 0;
    for bits in 0..(1u64 << n) {
        let count = all.iter().filter(|&&c| holds(c, bits)).count() as u64;
        if count > best {
            best = count;
            if best == m {
                break;
            }
        }
    }
    best
}

/// Fraction of clauses with at least one true literal.
pub fn val(formula: &CnfFormula, assignment: &[bool]) -> Result<Fraction> {
    check_assignment(formula.num_vars(), assignment)?;
    Ok(Fraction::new(formula.satisfied_count(assignment) as u64, formula.num_clauses() as u64))
}

/// Largest [`val`] over all assignments.
pub fn max_val(formula: &CnfFormula) -> Result<Fraction> {
    max_val_with(formula, &ExactLimits::default())
}

pub fn max_val_with(formula: &CnfFormula, limits: &ExactLimits) -> Result<Fraction> {
    check_vars(formula.num_vars(), limits)?;
    let all: Vec<Masks> = formula.clauses().iter().map(masks).collect();
    let best = best_over_assignments(formula.num_vars(), &all, or_holds);
    Ok(Fraction::new(best, all.len() as u64))
}

/// Fraction of clauses whose literals are not all equal.
pub fn val_nae(formula: &NaeFormula, assignment: &[bool]) -> Result<Fraction> {
    check_assignment(formula.num_vars(), assignment)?;
    Ok(Fraction::new(formula.satisfied_count(assignment) as u64, formula.num_clauses() as u64))
}

/// Largest [`val_nae`] over all assignments.
pub fn max_val_nae(formula: &NaeFormula) -> Result<Fraction> {
    max_val_nae_with(formula, &ExactLimits::default())
}

pub fn max_val_nae_with(formula: &NaeFormula, limits: &ExactLimits) -> Result<Fraction> {
    check_vars(formula.num_vars(), limits)?;
    let all: Vec<Masks> = formula.clauses().iter().map(masks).collect();
    let best = best_over_assignments(formula.num_vars(), &all, nae_holds);
    Ok(Fraction::new(best, all.len() as u64))
}

fn edge_masks(h: &Hypergraph3) -> Vec<Masks> {
    h.edges()
        .iter()
        .map(|e| Masks { pos: e.iter().fold(0, |acc, &v| acc | 1 << v), neg: 0 })
        .collect()
}

/// Largest fraction of non-monochromatic hyperedges over all 2-colourings.
pub fn max_bichromatic_fraction(h: &Hypergraph3) -> Result<Fraction> {
    max_bichromatic_fraction_with(h, &ExactLimits::default())
}

pub fn max_bichromatic_fraction_with(h: &Hypergraph3, limits: &ExactLimits) -> Result<Fraction> {
    check_vars(h.num_vertices(), limits)?;
    let all = edge_masks(h);
    let best = best_over_assignments(h.num_vertices(), &all, nae_holds);
    Ok(Fraction::new(best, all.len() as u64))
}

pub fn is_2_colorable(h: &Hypergraph3) -> Result<bool> {
    Ok(max_bichromatic_fraction(h)?.is_one())
}
