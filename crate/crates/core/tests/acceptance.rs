//! The acceptance gate: the full verification matrix at contract sizes,
//! grouped into eleven criteria that each print exactly one pass/fail
//! line. Runs sequentially so the per-criterion wall-clock budgets are
//! measured honestly. Exits nonzero when any criterion fails, which
//! makes `cargo test` report the failure.

use std::time::{Duration, Instant};

use lzb_core::report::Report;
use lzb_core::suite::{full_matrix, run_matrix, SuiteCase};

struct Outcome {
    label: &'static str,
    cases: usize,
    elapsed: Duration,
    notes: Vec<String>,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.notes.is_empty()
    }
}

fn family(all: &[SuiteCase], prefix: &str) -> Vec<SuiteCase> {
    let picked: Vec<SuiteCase> = all
        .iter()
        .filter(|c| c.key().starts_with(prefix))
        .cloned()
        .collect();
    assert!(!picked.is_empty(), "no cases selected by prefix {}", prefix);
    picked
}

fn run_gate(label: &'static str, cases: Vec<SuiteCase>, budget: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let results = run_matrix(&cases, false);
    let elapsed = start.elapsed();
    let mut notes = Vec::new();
    for (key, report) in results.iter().filter(|(_, r)| !r.is_pass()) {
        notes.push(format!("{} {}", key, report.to_json()));
    }
    if let Some(limit) = budget {
        if elapsed > limit {
            notes.push(format!("budget exceeded: {:?} > {:?}", elapsed, limit));
        }
    }
    Outcome { label, cases: results.len(), elapsed, notes }
}

fn render(rows: &[(String, Report)]) -> String {
    rows.iter()
        .map(|(k, r)| format!("{} {}\n", k, r.to_json()))
        .collect()
}

fn main() {
    let all = full_matrix(8, 3);
    let mut outcomes = Vec::new();

    outcomes.push(run_gate(
        "macdonald polynomials collapse to schur at t=q",
        family(&all, "01-"),
        Some(Duration::from_secs(10)),
    ));
    outcomes.push(run_gate(
        "t=0 specialization matches the direct expansion",
        family(&all, "02-"),
        None,
    ));
    outcomes.push(run_gate(
        "strip coefficients match the series oracle",
        family(&all, "03-"),
        None,
    ));
    outcomes.push(run_gate(
        "littlewood-richardson axioms and reconstruction",
        family(&all, "04-"),
        None,
    ));
    outcomes.push(run_gate(
        "graded characters sum to the demazure character",
        family(&all, "05-"),
        Some(Duration::from_secs(60)),
    ));
    outcomes.push(run_gate(
        "fundamental branching, refined pieces, and edges",
        family(&all, "06-"),
        None,
    ));
    outcomes.push(run_gate(
        "defining relations on truncated tensor models",
        family(&all, "07-"),
        Some(Duration::from_secs(120)),
    ));
    outcomes.push(run_gate(
        "closed-form divided-power expansions",
        family(&all, "08-"),
        None,
    ));
    outcomes.push(run_gate(
        "embedding grading, eigenblocks, multiplicities",
        family(&all, "09-"),
        None,
    ));
    outcomes.push(run_gate(
        "transport constants integral, stable, doubling",
        family(&all, "10-"),
        None,
    ));

    // The whole matrix once more in one serial sweep for the wall-clock
    // budget, then in parallel; the two rendered reports must agree byte
    // for byte.
    let start = Instant::now();
    let serial = run_matrix(&all, false);
    let serial_elapsed = start.elapsed();
    let parallel = run_matrix(&all, true);
    let mut notes = Vec::new();
    for (key, report) in serial.iter().filter(|(_, r)| !r.is_pass()) {
        notes.push(format!("{} {}", key, report.to_json()));
    }
    if render(&serial) != render(&parallel) {
        notes.push("parallel report differs from serial report".to_string());
    }
    if serial_elapsed > Duration::from_secs(300) {
        notes.push(format!("serial sweep over budget: {:?} > 300s", serial_elapsed));
    }
    outcomes.push(Outcome {
        label: "full matrix in budget, parallel run identical",
        cases: serial.len(),
        elapsed: serial_elapsed,
        notes,
    });

    let mut failed = 0usize;
    for (idx, outcome) in outcomes.iter().enumerate() {
        let verdict = if outcome.passed() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:02}  {:<48} {}  ({} cases, {:.2?})",
            idx + 1,
            outcome.label,
            verdict,
            outcome.cases,
            outcome.elapsed
        );
        for note in &outcome.notes {
            println!("    {}", note);
        }
        if !outcome.passed() {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{} of {} criteria failed", failed, outcomes.len());
        std::process::exit(1);
    }
}
