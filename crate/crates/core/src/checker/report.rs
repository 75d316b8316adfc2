//! Report lines and their human and JSON renderings.

use std::fmt::Write as _;
use std::time::Duration;

use serde_json::{json, Value};

use crate::sweep::Bound;
use crate::syntax::Style;

use super::{Claim, Expected};

/// The verdict on one claim or property sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct FactReport {
    pub id: String,
    pub statement: String,
    pub statement_unicode: String,
    pub expected: Expected,
    pub holds: bool,
    /// `None` for checks at a single fixed point rather than a sweep.
    pub bound: Option<Bound>,
    /// Counter-model JSON when the claim fails by search.
    pub witness: Option<Value>,
    pub notes: Vec<String>,
    /// Reasons the report does not match, beyond the verdict itself.
    pub problems: Vec<String>,
    pub elapsed: Duration,
}

impl FactReport {
    pub fn new(claim: &Claim, holds: bool, bound: Option<Bound>) -> FactReport {
        FactReport::bare(&claim.id, claim.statement(Style::Ascii), claim.statement(Style::Unicode), claim.expected, holds, bound)
    }

    pub fn bare(id: &str, ascii: String, unicode: String, expected: Expected, holds: bool, bound: Option<Bound>) -> FactReport {
        FactReport {
            id: id.to_string(),
            statement: ascii,
            statement_unicode: unicode,
            expected,
            holds,
            bound,
            witness: None,
            notes: Vec::new(),
            problems: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn mismatch(&mut self, text: impl Into<String>) {
        self.problems.push(text.into());
    }

    pub fn verdict(&self) -> Expected {
        if self.holds {
            Expected::Holds
        } else {
            Expected::Fails
        }
    }

    pub fn matches(&self) -> bool {
        self.verdict() == self.expected && self.problems.is_empty()
    }

    /// `holds (valid up to n<=3 worlds)` or `fails`.
    pub fn verdict_label(&self) -> String {
        match (self.holds, self.bound) {
            (true, Some(b)) => format!("holds (valid up to {b})"),
            (true, None) => "holds".to_string(),
            (false, _) => "fails".to_string(),
        }
    }

    fn to_json(&self, opts: RenderOptions) -> Value {
        let mut v = json!({
            "id": self.id,
            "statement": if opts.style == Style::Unicode { &self.statement_unicode } else { &self.statement },
            "expected": self.expected.name(),
            "verdict": self.verdict().name(),
            "bound": self.bound.map(|b| b.to_string()),
            "matches": self.matches(),
            "witness": self.witness,
            "notes": self.notes,
            "problems": self.problems,
        });
        if opts.timings {
            v["elapsed_ms"] = json!(self.elapsed.as_millis() as u64);
        }
        v
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RenderOptions {
    pub style: Style,
    /// Include elapsed times. Off by default so reports are reproducible byte for byte.
    pub timings: bool,
}

/// One line per report plus indented detail lines, then a summary line.
pub fn render_human(reports: &[FactReport], opts: RenderOptions) -> String {
    let mut out = String::new();
    for r in reports {
        let tag = if r.matches() { "ok  " } else { "FAIL" };
        let stmt = if opts.style == Style::Unicode { &r.statement_unicode } else { &r.statement };
        let _ = writeln!(out, "{tag} {}: {stmt}: {} (expected {})", r.id, r.verdict_label(), r.expected);
        for n in &r.notes {
            let _ = writeln!(out, "     note: {n}");
        }
        for p in &r.problems {
            let _ = writeln!(out, "     problem: {p}");
        }
        if let Some(w) = &r.witness {
            let _ = writeln!(out, "     witness: {w}");
        }
        if opts.timings {
            let _ = writeln!(out, "     time: {} ms", r.elapsed.as_millis());
        }
    }
    let matched = reports.iter().filter(|r| r.matches()).count();
    let _ = writeln!(out, "{matched}/{} matched", reports.len());
    out
}

pub fn render_json(reports: &[FactReport], opts: RenderOptions) -> String {
    let matched = reports.iter().filter(|r| r.matches()).count();
    let v = json!({
        "reports": reports.iter().map(|r| r.to_json(opts)).collect::<Vec<_>>(),
        "matched": matched,
        "total": reports.len(),
    });
    serde_json::to_string_pretty(&v).expect("report serializes")
}
