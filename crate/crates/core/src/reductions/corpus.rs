//! Seeded random inputs for every stage of the chain.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, Hypergraph3, Literal, NaeFormula};

fn random_clause(rng: &mut ChaCha8Rng, num_vars: usize, width: usize, signed: bool) -> Clause {
    sample(rng, num_vars, width)
        .into_iter()
        .map(|v| if signed && rng.gen() { Literal::neg(v) } else { Literal::pos(v) })
        .collect()
}

fn check_width(num_vars: usize, width: usize) -> Result<()> {
    if num_vars < width {
        return Err(Error::InvalidParams(format!("{width} distinct variables need num_vars >= {width}, got {num_vars}")));
    }
    Ok(())
}

/// E3-SAT formula whose clauses use three distinct variables.
pub fn random_e3sat(num_vars: usize, num_clauses: usize, seed: u64) -> Result<CnfFormula> {
    check_width(num_vars, 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..num_clauses).map(|_| random_clause(&mut rng, num_vars, 3, true)).collect();
    CnfFormula::new(num_vars, 3, clauses)
}

/// NAE formula of the given arity (3 or 6) with distinct variables per clause.
pub fn random_nae(num_vars: usize, arity: usize, num_clauses: usize, monotone: bool, seed: u64) -> Result<NaeFormula> {
    check_width(num_vars, arity)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..num_clauses).map(|_| random_clause(&mut rng, num_vars, arity, !monotone)).collect();
    NaeFormula::new(num_vars, arity, clauses)
}

pub fn random_hypergraph(num_vertices: usize, num_edges: usize, seed: u64) -> Result<Hypergraph3> {
    check_width(num_vertices, 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..num_edges)
        .map(|_| {
            let s = sample(&mut rng, num_vertices, 3);
            [s.index(0), s.index(1), s.index(2)]
        })
        .collect();
    Hypergraph3::new(num_vertices, edges)
}

/// All eight sign patterns over three variables: unsatisfiable, with optimum
/// 7/8.
pub fn unsatisfiable_cube() -> CnfFormula {
    let clauses = (0..8u8)
        .map(|s| (0..3).map(|v| if s >> v & 1 == 1 { Literal::neg(v) } else { Literal::pos(v) }).collect())
        .collect();
    CnfFormula::new(3, 3, clauses).expect("valid cube")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_distinct() {
        let a = random_e3sat(6, 10, 3).unwrap();
        assert_eq!(a, random_e3sat(6, 10, 3).unwrap());
        assert!(a.has_distinct_vars());
        assert!(random_nae(7, 6, 5, false, 1).unwrap().has_distinct_vars());
        assert!(random_nae(5, 3, 5, true, 1).unwrap().is_monotone());
        assert!(random_e3sat(2, 1, 0).is_err());
    }

    #[test]
    fn cube_value() {
        assert_eq!(crate::exact::max_val(&unsatisfiable_cube()).unwrap(), crate::exact::Fraction::new(7, 8));
    }
}
