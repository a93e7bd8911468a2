use ssac_core::exact::sat::{cnf_satisfiable, nae_satisfiable};
use ssac_core::exact::{is_2_colorable, max_bichromatic_fraction, max_val, max_val_nae, Fraction};
use ssac_core::formula::{Hypergraph3, Literal, NaeFormula};
use ssac_core::reductions::corpus::{random_e3sat, random_hypergraph, random_nae, unsatisfiable_cube};
use ssac_core::reductions::{
    e3sat_to_nae6sat, monotone_to_hypergraph, nae3sat_to_monotone, nae6sat_to_nae3sat, reduce_once, run_chain,
    verify_reduction_gap, Artifact, CheckStatus, Stage, VerifyBudget,
};

fn verified(arts: &[Artifact]) -> ssac_core::reductions::GapReport {
    let report = verify_reduction_gap(arts, &VerifyBudget::default()).unwrap();
    assert!(report.passed(), "{:?}", report.failures());
    assert!(report.complete());
    report
}

#[test]
fn satisfiable_chain_ends_at_baseline() {
    for seed in 0..4 {
        let (arts, trace) = run_chain(Artifact::E3sat(random_e3sat(8, 6, seed).unwrap()), Stage::Correlation).unwrap();
        assert!(trace.matches(&arts));
        let report = verified(&arts);
        assert!(report.values.iter().all(|v| v.perfect == Some(true)));
        assert_eq!(report.values[5].excess, Some(0));
    }
}

#[test]
fn unsatisfiable_cube_stays_unsatisfiable() {
    let (arts, _) = run_chain(Artifact::E3sat(unsatisfiable_cube()), Stage::Correlation).unwrap();
    let report = verified(&arts);
    assert!(report.values.iter().all(|v| v.perfect == Some(false)));
    assert_eq!(report.values[0].value, Some(Fraction::new(7, 8)));
    assert!(report.values[5].excess.unwrap() >= 1);
}

#[test]
fn clause_counts_from_the_construction() {
    let (phi, _) = e3sat_to_nae6sat(&random_e3sat(7, 5, 2).unwrap()).unwrap();
    assert_eq!(phi.num_clauses(), 20);
    let one = random_nae(6, 6, 1, false, 0).unwrap();
    let (psi, t) = nae6sat_to_nae3sat(&one).unwrap();
    assert_eq!((psi.num_clauses(), psi.num_vars()), (4, 9));
    assert_eq!(t.output_names[6..], ["x.c1", "y.c1", "z.c1"]);
    let (psi, _) = nae6sat_to_nae3sat(&random_nae(8, 6, 3, false, 1).unwrap()).unwrap();
    assert_eq!(psi.num_clauses(), 12);
}

#[test]
fn satisfiability_is_preserved_by_each_step() {
    for seed in 0..60 {
        let psi = random_e3sat(5, 4 + (seed as usize % 3), seed).unwrap();
        let (phi, _) = e3sat_to_nae6sat(&psi).unwrap();
        assert_eq!(max_val(&psi).unwrap().is_one(), max_val_nae(&phi).unwrap().is_one());

        let f6 = random_nae(6, 6, 1 + seed as usize % 4, false, seed).unwrap();
        let (f3, _) = nae6sat_to_nae3sat(&f6).unwrap();
        assert_eq!(nae_satisfiable(&f6).unwrap().is_some(), max_val_nae(&f3).unwrap().is_one());

        let g3 = random_nae(4, 3, 2 + seed as usize % 3, false, seed).unwrap();
        let (mono, _) = nae3sat_to_monotone(&g3).unwrap();
        assert_eq!(max_val_nae(&g3).unwrap().is_one(), nae_satisfiable(&mono).unwrap().is_some());

        let m = random_nae(7, 3, 3 + seed as usize % 8, true, seed).unwrap();
        let (h, _) = monotone_to_hypergraph(&m).unwrap();
        assert_eq!(max_val_nae(&m).unwrap(), max_bichromatic_fraction(&h).unwrap());
        assert_eq!(nae_satisfiable(&m).unwrap().is_some(), is_2_colorable(&h).unwrap());
    }
    assert!(cnf_satisfiable(&unsatisfiable_cube()).unwrap().is_none());
}

#[test]
fn fano_instance_is_strictly_above_baseline() {
    let arts = [Artifact::Hypergraph(Hypergraph3::fano())];
    let (down, _) = reduce_once(&arts[0]).unwrap();
    let report = verified(&[arts[0].clone(), down]);
    assert_eq!(report.values[1].perfect, Some(false));
    let strict = report.stages[0].checks.iter().find(|c| c.name == "strict gap").unwrap();
    assert_eq!(strict.status, CheckStatus::Pass);
}

fn complete_triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn monotone_of(n: usize, edges: &[[usize; 3]]) -> NaeFormula {
    NaeFormula::new(n, 3, edges.iter().map(|e| e.iter().map(|&v| Literal::pos(v)).collect()).collect()).unwrap()
}

// dense inputs, so that the gap checks see values below 1
#[test]
fn gap_checks_on_unsatisfiable_inputs() {
    let mut inputs = vec![
        Artifact::Monotone(monotone_of(6, &complete_triples(6))),
        Artifact::Monotone(monotone_of(7, Hypergraph3::fano().edges())),
        Artifact::Hypergraph(Hypergraph3::new(5, complete_triples(5)).unwrap()),
    ];
    for seed in 0..4 {
        inputs.push(Artifact::Nae6sat(random_nae(6, 6, 20, false, seed).unwrap()));
        inputs.push(Artifact::Nae3sat(random_nae(4, 3, 12, false, seed).unwrap()));
        inputs.push(Artifact::Monotone(random_nae(6, 3, 20, true, seed).unwrap()));
        inputs.push(Artifact::Hypergraph(random_hypergraph(5, 10, seed).unwrap()));
    }
    let mut below_one = 0;
    for up in inputs {
        let (down, _) = reduce_once(&up).unwrap();
        let report = verified(&[up, down]);
        below_one += usize::from(report.values[0].perfect == Some(false));
        assert_eq!(report.stages[0].gaps.len(), if report.stages[0].from == Stage::Hypergraph { 0 } else { 9 });
    }
    assert!(below_one >= 6, "{below_one}");
}

#[test]
fn corrupted_stage_is_reported() {
    let (mut arts, _) = run_chain(Artifact::E3sat(random_e3sat(6, 4, 9).unwrap()), Stage::Nae6sat).unwrap();
    let Artifact::Nae6sat(f) = &arts[1] else { unreachable!() };
    let mut clauses = f.clauses().to_vec();
    clauses[0][0] = clauses[0][0].negate();
    clauses.pop();
    arts[1] = Artifact::Nae6sat(NaeFormula::new(f.num_vars(), 6, clauses).unwrap());
    let report = verify_reduction_gap(&arts, &VerifyBudget::default()).unwrap();
    assert!(!report.passed());
    let failures = report.failures().join("\n");
    assert!(failures.contains("construction") && failures.contains("clause count"), "{failures}");
}

#[test]
fn monotone_step_rejects_repeated_variables() {
    let f = NaeFormula::new(2, 3, vec![vec![Literal::pos(0), Literal::pos(0), Literal::pos(1)]]).unwrap();
    assert!(monotone_to_hypergraph(&f).is_err());
}
