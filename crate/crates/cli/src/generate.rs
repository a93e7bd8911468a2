use anyhow::Result;
use serde::Serialize;
use ssac_core::instance::{planted_instance, write_clustering, write_instance};
use ssac_core::reductions::corpus::{random_e3sat, random_hypergraph, random_nae};
use ssac_core::reductions::{Artifact, Stage};
use ssac_core::PlantedSpec;

use crate::args::{GenerateArgs, GenerateKind};
use crate::error::usage;
use crate::io::{emit, to_json, write};
use crate::report::Provenance;

#[derive(Serialize)]
struct GenerateReport {
    provenance: Provenance,
    kind: String,
    seed: u64,
    files: Vec<String>,
    n: usize,
    k: Option<usize>,
    noise: Option<f64>,
    m: Option<usize>,
}

pub fn run(args: &GenerateArgs) -> Result<()> {
    let dir = args.common.out.clone().unwrap_or_else(|| ".".into());
    let seed = args.common.seed;
    let mut files = Vec::new();
    let mut report = GenerateReport {
        provenance: Provenance::new("generate"),
        kind: format!("{:?}", args.kind).to_lowercase(),
        seed,
        files: Vec::new(),
        n: args.n,
        k: None,
        noise: None,
        m: None,
    };
    if args.kind == GenerateKind::Planted {
        if !(0.0..=1.0).contains(&args.noise) {
            return Err(usage(format!("--noise must lie in [0, 1], got {}", args.noise)));
        }
        let spec = PlantedSpec::new(args.n, args.k, args.noise, seed).with_min_cluster_fraction(args.min_fraction);
        let (labeling, truth) = planted_instance(&spec)?;
        let mut buf = Vec::new();
        write_instance(&labeling, &mut buf)?;
        let inst = dir.join(format!("{}.cc", args.name));
        write(&inst, &buf)?;
        buf.clear();
        write_clustering(&truth, &mut buf)?;
        let tr = dir.join(format!("{}.truth", args.name));
        write(&tr, &buf)?;
        files.extend([inst, tr]);
        (report.k, report.noise) = (Some(args.k), Some(args.noise));
    } else {
        let (n, m) = (args.n, args.m);
        let artifact = match args.kind {
            GenerateKind::E3sat => Artifact::E3sat(random_e3sat(n, m, seed)?),
            GenerateKind::Nae6 => Artifact::Nae6sat(random_nae(n, 6, m, false, seed)?),
            GenerateKind::Nae3 => Artifact::Nae3sat(random_nae(n, 3, m, false, seed)?),
            GenerateKind::Monotone => Artifact::Monotone(random_nae(n, 3, m, true, seed)?),
            GenerateKind::Hypergraph => Artifact::Hypergraph(random_hypergraph(n, m, seed)?),
            GenerateKind::Planted => unreachable!(),
        };
        let stage: Stage = artifact.stage();
        let path = dir.join(format!("{}.{}", args.name, stage.extension()));
        write(&path, artifact.to_text()?.as_bytes())?;
        files.push(path);
        report.m = Some(m);
    }
    let prov = dir.join(format!("{}.json", args.name));
    files.push(prov.clone());
    report.files = files.iter().map(|p| p.display().to_string()).collect();
    let text = to_json(&report);
    write(&prov, text.as_bytes())?;
    emit(&text, None, args.common.quiet)
}
