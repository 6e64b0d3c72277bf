//! Seeded equivalence suites: reduction oracle answers vs decider answers.
//!
//! Machine-format reports are deterministic byte-for-byte given the same
//! arguments (wall times appear only in the human format), so reruns can be
//! diffed directly.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::json;

use gamecore::corecheck::membership;
use gamecore::reductions::{
    nodecover_to_hybrid, random_nodecover, random_x3c, solve_nodecover, solve_x3c, x3c_to_ntu,
    x3c_to_tu,
};
use gamecore::{decide_hybrid, decide_ntu, decide_tu, Decision, Game};

use crate::output::Format;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteKind {
    /// Exact cover -> NTU gadget -> frontier decider.
    Thm1,
    /// Exact cover -> TU gadget -> linear feasibility decider.
    Thm2,
    /// Node cover -> hybrid gadget -> branch-and-bound decider.
    Thm5,
}

impl SuiteKind {
    fn name(self) -> &'static str {
        match self {
            SuiteKind::Thm1 => "thm1",
            SuiteKind::Thm2 => "thm2",
            SuiteKind::Thm5 => "thm5",
        }
    }
}

pub struct SuiteParams {
    pub kind: SuiteKind,
    pub seeds: std::ops::RangeInclusive<u64>,
    pub m: usize,
    pub max_triples: usize,
    pub vertices: usize,
}

pub struct Record {
    pub id: String,
    pub seed: u64,
    pub expected: &'static str,
    pub got: &'static str,
    pub millis: u128,
}

impl Record {
    fn matches(&self) -> bool {
        self.expected == self.got
    }
}

pub struct RunReport {
    pub kind: &'static str,
    pub records: Vec<Record>,
}

impl RunReport {
    pub fn mismatches(&self) -> usize {
        self.records.iter().filter(|r| !r.matches()).count()
    }
}

fn status_of(nonempty: bool) -> &'static str {
    if nonempty {
        "NON_EMPTY"
    } else {
        "EMPTY"
    }
}

/// Decide and self-verify: a NON_EMPTY answer whose witness fails the
/// membership check is reported as WITNESS_REJECTED (and thus a mismatch).
fn checked_status(game: &Game, decision: &Decision) -> &'static str {
    match decision {
        Decision::Empty => "EMPTY",
        Decision::NonEmpty { witness, .. } => match membership(game, witness) {
            Ok(verdict) if verdict.is_in_core() => "NON_EMPTY",
            _ => "WITNESS_REJECTED",
        },
    }
}

pub fn run_suite(params: &SuiteParams) -> Result<RunReport> {
    let kind = params.kind.name();
    let mut records = Vec::new();
    for seed in params.seeds.clone() {
        let started = Instant::now();
        let (expected, got) = match params.kind {
            SuiteKind::Thm1 => {
                let inst = random_x3c(seed, params.m, params.max_triples)?;
                let game = x3c_to_ntu(&inst)?;
                let decision = decide_ntu(&game)?;
                (status_of(solve_x3c(&inst)), checked_status(&game, &decision))
            }
            SuiteKind::Thm2 => {
                let inst = random_x3c(seed, params.m, params.max_triples)?;
                let game = x3c_to_tu(&inst)?;
                let decision = decide_tu(&game)?;
                (status_of(solve_x3c(&inst)), checked_status(&game, &decision))
            }
            SuiteKind::Thm5 => {
                let inst = random_nodecover(seed, params.vertices, None)?;
                let game = nodecover_to_hybrid(&inst)?;
                let decision = decide_hybrid(&game)?;
                (status_of(solve_nodecover(&inst)?), checked_status(&game, &decision))
            }
        };
        records.push(Record {
            id: format!("{kind}-seed{seed}"),
            seed,
            expected,
            got,
            millis: started.elapsed().as_millis(),
        });
    }
    Ok(RunReport { kind, records })
}

pub fn write_machine(report: &RunReport, mut out: impl Write) -> Result<()> {
    for r in &report.records {
        let line = json!({
            "id": r.id,
            "seed": r.seed,
            "expected": r.expected,
            "got": r.got,
        });
        writeln!(out, "{line}")?;
    }
    let summary = json!({
        "kind": report.kind,
        "records": report.records.len(),
        "mismatches": report.mismatches(),
    });
    writeln!(out, "{summary}")?;
    Ok(())
}

pub fn write_human(report: &RunReport, mut out: impl Write) -> Result<()> {
    for r in &report.records {
        let mark = if r.matches() { "ok" } else { "MISMATCH" };
        writeln!(
            out,
            "{:<18} seed={:<6} expected={:<10} got={:<10} {:>5} ms  {}",
            r.id, r.seed, r.expected, r.got, r.millis, mark
        )?;
    }
    writeln!(
        out,
        "{}: {} records, {} mismatches",
        report.kind,
        report.records.len(),
        report.mismatches()
    )?;
    Ok(())
}

pub fn cmd_suite(params: &SuiteParams, format: Format, out: Option<&Path>) -> Result<ExitCode> {
    let report = run_suite(params)?;
    let mut rendered = Vec::new();
    match format {
        Format::Machine => write_machine(&report, &mut rendered)?,
        Format::Human => write_human(&report, &mut rendered)?,
    }
    match out {
        Some(path) => fs::write(path, &rendered).with_context(|| format!("writing {}", path.display()))?,
        None => {
            std::io::stdout().write_all(&rendered)?;
        }
    }
    Ok(if report.mismatches() == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
