use ssac_core::exact::opt_min_disagree;
use ssac_core::faulty_cluster::{
    faulty_parts_and_samples, faulty_query_max_agree, faulty_query_min_disagree, overlap_bound,
    recover_sample_partition, RecoveryConfig, RecoveryMethod,
};
use ssac_core::instance::{planted_clustering, planted_instance};
use ssac_core::oracle::SameClusterOracle;
use ssac_core::query_cluster::{query_max_agree, query_min_disagree, AlgorithmParams};
use ssac_core::{Clustering, EdgeLabeling, FaultyOracle, PerfectOracle, PlantedSpec, QueryLedger, SamplePartition};

fn truth_restriction(truth: &Clustering, sample: &[usize]) -> SamplePartition {
    SamplePartition::new(
        truth.restrict(sample).clusters().into_iter().map(|g| g.into_iter().map(|i| sample[i]).collect()).collect(),
    )
}

#[test]
fn local_search_recovers_two_groups_at_third_noise() {
    let truth = Clustering::from_labels(&(0..100).map(|v| v / 50).collect::<Vec<_>>());
    let sample: Vec<usize> = (0..100).collect();
    let want = truth_restriction(&truth, &sample);
    let mut hits = 0;
    for seed in 0..100 {
        let oracle = FaultyOracle::new(truth.clone(), 1.0 / 3.0, seed).unwrap();
        let cfg = RecoveryConfig::new(RecoveryMethod::LocalSearch, seed);
        let mut ledger = QueryLedger::new();
        let got = recover_sample_partition(&sample, &oracle, 2, &cfg, &mut ledger).unwrap();
        assert_eq!(ledger.count(), 4950);
        if got.same_partition(&want) {
            hits += 1;
        }
    }
    assert!(hits >= 90, "exact recovery in {hits}/100 trials");
}

#[test]
fn exact_ml_matches_brute_force_on_induced_instance() {
    for seed in 0..50u64 {
        let n = 6 + (seed as usize % 7);
        let truth = planted_clustering(&PlantedSpec::new(n, 2, 0.0, seed)).unwrap();
        let oracle = FaultyOracle::new(truth, 0.25, seed).unwrap();
        let sample: Vec<usize> = (0..n).collect();
        let cfg = RecoveryConfig::new(RecoveryMethod::ExactMl, seed);
        let got = recover_sample_partition(&sample, &oracle, 2, &cfg, &mut QueryLedger::new()).unwrap();

        let yes: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| oracle.answer(u, v).is_yes())
            .collect();
        let induced = EdgeLabeling::new(n, yes).unwrap();
        let (_, best) = opt_min_disagree(&induced, 2).unwrap();
        assert!(got.same_partition(&SamplePartition::new(best.clusters())), "seed {seed}");
    }
}

#[test]
fn q0_faulty_oracle_matches_perfect_oracle() {
    for seed in 0..10 {
        let (l, truth) = planted_instance(&PlantedSpec::new(60, 3, 0.1, seed)).unwrap();
        let perfect = PerfectOracle::new(truth.clone());
        let faulty = FaultyOracle::new(truth, 0.0, seed).unwrap();
        let p = AlgorithmParams::new(3, 0.5, seed);
        let cfg = RecoveryConfig::new(RecoveryMethod::LocalSearch, seed);
        let (mut a, mut b) = (QueryLedger::new(), QueryLedger::new());
        assert_eq!(
            faulty_query_min_disagree(&l, &p, &faulty, &mut a, &cfg).unwrap(),
            faulty_query_min_disagree(&l, &p, &perfect, &mut b, &cfg).unwrap()
        );
        assert_eq!(
            faulty_query_max_agree(&l, &p, &faulty, &mut a, &cfg).unwrap(),
            faulty_query_max_agree(&l, &p, &perfect, &mut b, &cfg).unwrap()
        );
        assert_eq!(
            query_min_disagree(&l, &p, &faulty, &mut a).unwrap(),
            query_min_disagree(&l, &p, &perfect, &mut b).unwrap()
        );
        assert_eq!(query_max_agree(&l, &p, &faulty, &mut a).unwrap(), query_max_agree(&l, &p, &perfect, &mut b).unwrap());
        assert_eq!(a.count(), b.count());
    }
}

#[test]
fn sample_groups_clear_the_size_floor_and_overlaps_stay_bounded() {
    let n = 10_000;
    let (mut floor_ok, mut overlap_ok) = (0, 0);
    for seed in 0..200u64 {
        let truth = planted_clustering(&PlantedSpec::new(n, 2, 0.0, seed).with_min_cluster_fraction(0.1)).unwrap();
        let p = AlgorithmParams::new(2, 0.5, seed);
        let (_, samples) = faulty_parts_and_samples(n, &p);
        let floor_holds = samples.iter().all(|s| {
            let floor = (s.len() as f64).sqrt();
            truth.restrict(s).sizes().iter().all(|&g| g as f64 >= floor)
        });
        floor_ok += usize::from(floor_holds);
        let c = overlap_bound(2, p.epsilon, p.delta);
        let mut ok = true;
        for i in 0..samples.len() {
            for j in i + 1..samples.len() {
                let overlap = samples[i].iter().filter(|u| samples[j].binary_search(u).is_ok()).count();
                ok &= overlap <= c;
            }
        }
        overlap_ok += usize::from(ok);
    }
    assert!(floor_ok >= 190, "{floor_ok}/200");
    assert!(overlap_ok >= 190, "{overlap_ok}/200");
}
