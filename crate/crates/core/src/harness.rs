//! Batch runs over the pinned corpus and report rendering.
//!
//! Reports come in two flavors: a human-readable text form and a
//! line-oriented structured form (`key=value` tokens). Both are
//! byte-deterministic for fixed inputs: entries are processed in name
//! order and every underlying computation is deterministic.

use std::fmt::Write as _;

use crate::classify::{self, Section};
use crate::coloring::{verify_bound, BoundReport, BoundVerdict, Theorem};
use crate::discharge::{self, RuleSetId};
use crate::generate::CorpusEntry;

#[derive(Debug)]
pub struct EntryResult {
    pub name: String,
    pub provenance: String,
    pub vertices: usize,
    pub edges: usize,
    pub girth: Option<usize>,
    pub report: BoundReport,
    /// Findings of the section matching the theorem.
    pub findings: usize,
    /// Final discharge total under the matching rule set, as
    /// `num/den`; None for entries rejected by the discharge engine.
    pub discharge_total: Option<String>,
    pub discharge_negatives: Option<usize>,
}

#[derive(Debug)]
pub struct BatchReport {
    pub theorem: Theorem,
    pub budget: u64,
    pub entries: Vec<EntryResult>,
}

impl BatchReport {
    pub fn counts(&self) -> (usize, usize, usize, usize) {
        let mut holds = 0;
        let mut hypo = 0;
        let mut counter = 0;
        let mut inconclusive = 0;
        for e in &self.entries {
            match e.report.verdict {
                BoundVerdict::Holds { .. } => holds += 1,
                BoundVerdict::HypothesisFailure(_) => hypo += 1,
                BoundVerdict::Counterexample { .. } => counter += 1,
                BoundVerdict::Inconclusive(_) => inconclusive += 1,
            }
        }
        (holds, hypo, counter, inconclusive)
    }

    pub fn any_counterexample(&self) -> bool {
        self.entries
            .iter()
            .any(|e| matches!(e.report.verdict, BoundVerdict::Counterexample { .. }))
    }
}

/// Verify the bound on every corpus entry; also record the matching
/// section's findings count and the discharge totals for the matching
/// rule set.
pub fn run_verify(corpus: &[CorpusEntry], theorem: Theorem, budget: u64) -> BatchReport {
    let section = Section::for_theorem(theorem);
    let ruleset = match theorem {
        Theorem::Main => RuleSetId::A,
        Theorem::Main2 => RuleSetId::B,
    };
    let mut entries: Vec<EntryResult> = corpus
        .iter()
        .map(|e| {
            let report = verify_bound(&e.graph, theorem, budget);
            let findings = classify::detect_configurations(&e.graph, section).len();
            let (total, negatives) = match discharge::run_discharge(&e.graph, ruleset, None) {
                Ok((outcome, _, rep)) => (
                    Some(discharge::fmt_charge(outcome.state.total())),
                    Some(rep.negatives.len()),
                ),
                Err(_) => (None, None),
            };
            EntryResult {
                name: e.name.clone(),
                provenance: e.kind.to_string(),
                vertices: e.graph.vertex_count(),
                edges: e.graph.edge_count(),
                girth: e.graph.girth(),
                report,
                findings,
                discharge_total: total,
                discharge_negatives: negatives,
            }
        })
        .collect();
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    BatchReport {
        theorem,
        budget,
        entries,
    }
}

fn verdict_word(v: &BoundVerdict) -> &'static str {
    match v {
        BoundVerdict::Holds { .. } => "holds",
        BoundVerdict::HypothesisFailure(_) => "hypothesis-failure",
        BoundVerdict::Counterexample { .. } => "counterexample",
        BoundVerdict::Inconclusive(_) => "inconclusive",
    }
}

fn girth_word(g: Option<usize>) -> String {
    g.map_or("inf".to_string(), |x| x.to_string())
}

pub fn render_structured(r: &BatchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "batch theorem={} budget={} entries={}",
        r.theorem.name(),
        r.budget,
        r.entries.len()
    );
    for e in &r.entries {
        let _ = write!(
            out,
            "entry name={} kind={} n={} m={} girth={} delta={} bound={} verdict={}",
            e.name,
            e.provenance,
            e.vertices,
            e.edges,
            girth_word(e.girth),
            e.report.delta,
            e.report.bound,
            verdict_word(&e.report.verdict)
        );
        if let BoundVerdict::Holds { colors_used } = e.report.verdict {
            let _ = write!(out, " colors={colors_used}");
        }
        let _ = write!(
            out,
            " planarity={}",
            if e.report.planarity_unverified {
                "unverified"
            } else {
                "embedding"
            }
        );
        let _ = write!(out, " findings={}", e.findings);
        if let (Some(t), Some(n)) = (&e.discharge_total, e.discharge_negatives) {
            let _ = write!(out, " discharge_total={t} discharge_negatives={n}");
        }
        out.push('\n');
    }
    let (holds, hypo, counter, inconclusive) = r.counts();
    let _ = writeln!(
        out,
        "summary holds={holds} hypothesis_failures={hypo} counterexamples={counter} inconclusive={inconclusive}"
    );
    out
}

pub fn render_text(r: &BatchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "bound verification: theorem {} (chi2 <= Delta + {}), budget {}",
        r.theorem.name(),
        r.theorem.k(),
        r.budget
    );
    for e in &r.entries {
        let _ = write!(
            out,
            "  {:<16} n={:<3} girth={:<4} Delta={:<2} bound={:<3} ",
            e.name,
            e.vertices,
            girth_word(e.girth),
            e.report.delta,
            e.report.bound
        );
        match &e.report.verdict {
            BoundVerdict::Holds { colors_used } => {
                let _ = writeln!(out, "holds (witness with {colors_used} colors)");
            }
            BoundVerdict::HypothesisFailure(reasons) => {
                let _ = writeln!(out, "hypothesis failure: {}", reasons.join("; "));
            }
            BoundVerdict::Counterexample { .. } => {
                let _ = writeln!(out, "COUNTEREXAMPLE");
            }
            BoundVerdict::Inconclusive(why) => {
                let _ = writeln!(out, "inconclusive: {why}");
            }
        }
    }
    let (holds, hypo, counter, inconclusive) = r.counts();
    let _ = writeln!(
        out,
        "summary: {holds} hold, {hypo} hypothesis failures, {counter} counterexamples, {inconclusive} inconclusive"
    );
    for e in &r.entries {
        if let BoundVerdict::Counterexample { serialized } = &e.report.verdict {
            let _ = writeln!(out, "counterexample graph {}:", e.name);
            out.push_str(serialized);
        }
    }
    out
}
