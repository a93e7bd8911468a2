use std::time::Instant;

use anyhow::Result;
use serde::Serialize;
use ssac_core::instance::planted_instance;
use ssac_core::PlantedSpec;

use crate::args::{BenchArgs, Format};
use crate::error::usage;
use crate::io::{emit, to_json};
use crate::report::Provenance;
use crate::run::{check_flags, exact_optimum, judge, query_bound, run_once};

/// Aggregate of one grid cell over its seeds.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BenchRow {
    pub method: String,
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub q: Option<f64>,
    pub seeds: u64,
    pub base_seed: u64,
    pub query_mean: f64,
    pub query_std: f64,
    pub query_max: u64,
    pub query_bound: Option<u64>,
    pub cost_mean: f64,
    pub cost_std: f64,
    pub ratio_mean: Option<f64>,
    pub success_rate: Option<f64>,
    pub time_ms_mean: Option<f64>,
    pub version: String,
}

#[derive(Serialize)]
struct BenchReport {
    provenance: Provenance,
    rows: Vec<BenchRow>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn rows(args: &BenchArgs) -> Result<Vec<BenchRow>> {
    let algo = &args.algo;
    let epsilons = if args.epsilons.is_empty() { vec![algo.epsilon] } else { args.epsilons.clone() };
    let qs: Vec<Option<f64>> = match (algo.method.is_faulty(), args.qs.is_empty()) {
        (false, true) => vec![None],
        (false, false) => return Err(usage(format!("--qs applies only to faulty methods, not {}", algo.method.name()))),
        (true, true) => vec![algo.q],
        (true, false) => args.qs.iter().map(|&q| Some(q)).collect(),
    };
    if args.seeds == 0 {
        return Err(usage("--seeds must be positive"));
    }
    let cells = args.ns.len() * args.ks.len() * epsilons.len() * qs.len();
    let runs = cells * args.seeds as usize;
    if runs > args.budget {
        return Err(usage(format!("the grid needs {runs} runs, more than --budget {}", args.budget)));
    }
    let mut out = Vec::with_capacity(cells);
    for &n in &args.ns {
        for &k in &args.ks {
            for &epsilon in &epsilons {
                for &q in &qs {
                    let mut cell = algo.clone();
                    (cell.epsilon, cell.q) = (epsilon, q);
                    check_flags(&cell, true)?;
                    let (mut queries, mut costs, mut ratios, mut wins, mut times) =
                        (Vec::new(), Vec::new(), Vec::new(), 0usize, Vec::new());
                    for s in 0..args.seeds {
                        let seed = args.common.seed.wrapping_add(s);
                        let spec = PlantedSpec::new(n, k, args.noise, seed).with_min_cluster_fraction(args.min_fraction);
                        let (labeling, truth) = planted_instance(&spec)?;
                        let start = Instant::now();
                        let res = run_once(&labeling, Some(&truth), &cell, k, seed)?;
                        times.push(start.elapsed().as_secs_f64() * 1e3);
                        queries.push(res.query_count as f64);
                        costs.push(res.cost as f64);
                        if cell.compare_exact {
                            let opt = exact_optimum(&cell, &labeling, k)?;
                            let (ratio, ok) = judge(&cell, n, res.cost, opt);
                            ratios.extend(ratio);
                            wins += usize::from(ok);
                        }
                    }
                    let (query_mean, query_std) = mean_std(&queries);
                    let (cost_mean, cost_std) = mean_std(&costs);
                    out.push(BenchRow {
                        method: cell.method.name().into(),
                        n,
                        k,
                        epsilon,
                        q,
                        seeds: args.seeds,
                        base_seed: args.common.seed,
                        query_mean,
                        query_std,
                        query_max: queries.iter().fold(0.0f64, |a, &b| a.max(b)) as u64,
                        query_bound: query_bound(&cell, n, k),
                        cost_mean,
                        cost_std,
                        ratio_mean: (!ratios.is_empty()).then(|| mean_std(&ratios).0),
                        success_rate: cell.compare_exact.then(|| wins as f64 / args.seeds as f64),
                        time_ms_mean: cell.timing.then(|| mean_std(&times).0),
                        version: env!("CARGO_PKG_VERSION").into(),
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn run(args: &BenchArgs) -> Result<()> {
    let rows = rows(args)?;
    let text = match args.common.format {
        Format::Json => to_json(&BenchReport { provenance: Provenance::new("bench"), rows }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    emit(&text, args.common.out.as_ref(), args.common.quiet)
}
