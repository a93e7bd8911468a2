use std::path::Path;

use anyhow::Result;
use serde::Serialize;
use ssac_core::reductions::{run_chain, verify_reduction_gap, GapReport, Stage, VerifyBudget};

use crate::args::{Format, VerifyArgs};
use crate::error::{usage, CliError};
use crate::io::{emit, read_text, to_json};
use crate::reduce::parse_stage;
use crate::report::Provenance;

#[derive(Serialize)]
struct VerifyReport {
    provenance: Provenance,
    passed: bool,
    complete: bool,
    failures: Vec<String>,
    report: GapReport,
}

fn stage_of(path: &Path) -> Result<Stage> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    Stage::ALL
        .into_iter()
        .find(|s| s.extension() == ext)
        .ok_or_else(|| usage(format!("cannot tell the stage of {} from its extension", path.display())))
}

pub fn run(args: &VerifyArgs) -> Result<()> {
    if args.common.format != Format::Json {
        return Err(usage("verify writes JSON reports only"));
    }
    let mut artifacts = Vec::new();
    for path in &args.files {
        let stage = stage_of(path)?;
        artifacts.push(parse_stage(stage, &read_text(path)?, &path.display().to_string())?);
    }
    if let Some(to) = args.chain_to {
        if artifacts.len() != 1 {
            return Err(usage("--chain-to takes exactly one input file"));
        }
        let start = artifacts.pop().expect("one artifact");
        if to < start.stage() {
            return Err(usage(format!("cannot reduce from {} back to {to}", start.stage())));
        }
        artifacts = run_chain(start, to)?.0;
    }
    for w in artifacts.windows(2) {
        if w[0].stage().next() != Some(w[1].stage()) {
            return Err(usage(format!("{} is not followed by {} in the chain", w[0].stage(), w[1].stage())));
        }
    }
    let budget = VerifyBudget { max_violated: args.max_violated, seed: args.common.seed, ..VerifyBudget::default() };
    let report = verify_reduction_gap(&artifacts, &budget)?;
    let out = VerifyReport {
        provenance: Provenance::new("verify"),
        passed: report.passed(),
        complete: report.complete(),
        failures: report.failures(),
        report,
    };
    emit(&to_json(&out), args.common.out.as_ref(), args.common.quiet)?;
    if !out.passed {
        return Err(CliError::Failed(format!("violated properties:\n  {}", out.failures.join("\n  "))).into());
    }
    if !out.complete {
        eprintln!("warning: some checks were skipped for lack of budget");
    }
    Ok(())
}
