use anyhow::Result;
use serde::Serialize;
use ssac_core::reductions::{run_chain, Artifact, ReductionTrace, Stage};

use crate::args::ReduceArgs;
use crate::error::usage;
use crate::io::{emit, read_text, to_json, write};
use crate::report::Provenance;

#[derive(Serialize)]
struct ReduceReport {
    provenance: Provenance,
    from: Stage,
    to: Stage,
    files: Vec<String>,
    trace: ReductionTrace,
}

/// Parses `text` as a `stage` artifact, turning any mismatch into a usage
/// error that names the stage.
pub fn parse_stage(stage: Stage, text: &str, what: &str) -> Result<Artifact> {
    Artifact::parse(stage, text).map_err(|e| usage(format!("{what} is not a valid {stage} file: {e}")))
}

pub fn run(args: &ReduceArgs) -> Result<()> {
    if args.to < args.from {
        return Err(usage(format!("cannot reduce from {} back to {}", args.from, args.to)));
    }
    let text = read_text(&args.input)?;
    let start = parse_stage(args.from, &text, &args.input.display().to_string())?;
    let (artifacts, trace) = run_chain(start, args.to)?;
    let dir = args.common.out.clone().unwrap_or_else(|| ".".into());
    let mut files = Vec::new();
    for a in &artifacts[1..] {
        let path = dir.join(format!("{}.{}", args.name, a.stage().extension()));
        write(&path, a.to_text()?.as_bytes())?;
        files.push(path.display().to_string());
    }
    let trace_path = dir.join(format!("{}.trace.json", args.name));
    write(&trace_path, to_json(&trace).as_bytes())?;
    files.push(trace_path.display().to_string());
    let report = ReduceReport { provenance: Provenance::new("reduce"), from: args.from, to: args.to, files, trace };
    emit(&to_json(&report), None, args.common.quiet)
}
