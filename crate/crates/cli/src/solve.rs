use std::time::Instant;

use anyhow::Result;
use ssac_core::instance::write_clustering;

use crate::args::{Format, SolveArgs};
use crate::error::usage;
use crate::io::{emit, load_clustering, load_instance, to_json, write};
use crate::report::{InstanceInfo, Objective, Params, Provenance, RunReport, Trial, TrialStats};
use crate::run::{check_flags, exact_optimum, judge, query_bound, run_once};

pub fn run(args: &SolveArgs) -> Result<()> {
    let start = Instant::now();
    let algo = &args.algo;
    if args.common.format != Format::Json {
        return Err(usage("solve writes JSON reports only"));
    }
    if args.trials == 0 {
        return Err(usage("--trials must be positive"));
    }
    check_flags(algo, args.truth.is_some())?;
    let labeling = load_instance(&args.instance)?;
    let truth = args.truth.as_deref().map(load_clustering).transpose()?;
    if let Some(t) = &truth {
        if t.n() != labeling.n() {
            return Err(usage(format!("truth has {} vertices, instance has {}", t.n(), labeling.n())));
        }
    }
    let n = labeling.n();
    let opt = if algo.compare_exact { Some(exact_optimum(algo, &labeling, args.k)?) } else { None };

    let seeds: Vec<u64> = (0..args.trials as u64).map(|t| args.common.seed.wrapping_add(t)).collect();
    let mut trials = Vec::with_capacity(seeds.len());
    for (i, &seed) in seeds.iter().enumerate() {
        let out = run_once(&labeling, truth.as_ref(), algo, args.k, seed)?;
        if i == 0 {
            if let Some(path) = &args.clustering_out {
                let mut buf = Vec::new();
                write_clustering(&out.clustering, &mut buf)?;
                write(path, &buf)?;
            }
        }
        let judged = opt.map(|o| judge(algo, n, out.cost, o));
        trials.push(Trial {
            seed,
            cost: out.cost,
            clusters: out.clustering.k(),
            query_count: out.query_count,
            approximation_ratio: judged.and_then(|j| j.0),
            success: judged.map(|j| j.1),
        });
    }

    let count = trials.len() as f64;
    let stats = TrialStats {
        trials: trials.len(),
        mean_cost: trials.iter().map(|t| t.cost as f64).sum::<f64>() / count,
        mean_query_count: trials.iter().map(|t| t.query_count as f64).sum::<f64>() / count,
        max_query_count: trials.iter().map(|t| t.query_count).max().unwrap_or(0),
        success_rate: opt.map(|_| trials.iter().filter(|t| t.success == Some(true)).count() as f64 / count),
    };
    let report = RunReport {
        provenance: Provenance::new("solve"),
        method: algo.method.name().into(),
        instance: InstanceInfo {
            n,
            k: args.k,
            positives: labeling.num_positive(),
            source: args.instance.display().to_string(),
        },
        params: Params {
            epsilon: algo.epsilon,
            delta: algo.delta,
            q: algo.q,
            seed: args.common.seed,
            trial_seeds: seeds,
            sample_scale: algo.sample_scale,
            recovery: algo.method.is_faulty().then(|| algo.recovery.name().to_string()),
            literal_step7: algo.literal_step7,
        },
        objective: if algo.method.maximises() { Objective::Agreements } else { Objective::Disagreements },
        cost: trials[0].cost,
        query_count: trials[0].query_count,
        query_bound: query_bound(algo, n, args.k),
        exact_optimum: opt,
        approximation_ratio: trials[0].approximation_ratio,
        stats,
        trials,
        wall_time_ms: algo.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    };
    emit(&to_json(&report), args.common.out.as_ref(), args.common.quiet)
}
