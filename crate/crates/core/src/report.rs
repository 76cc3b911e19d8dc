//! Structured records of checked inequalities.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

use crate::error::Result;

/// Inputs that identify a check well enough to rerun it.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Params {
    pub body: String,
    pub d: usize,
    pub t: Option<f64>,
    pub n: Option<usize>,
    pub seed: u64,
    pub budgets: BTreeMap<String, f64>,
}

impl Params {
    pub fn new(body: impl Into<String>, d: usize, seed: u64) -> Self {
        Self {
            body: body.into(),
            d,
            seed,
            ..Default::default()
        }
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn budget(mut self, key: &str, value: f64) -> Self {
        self.budgets.insert(key.to_string(), value);
        self
    }
}

/// One checked inequality `lhs ≤ rhs`.
///
/// `margin = rhs - lhs`; the check passes iff `margin ≥ -tolerance`. When the
/// hypothesis of the claim is not met the report is informational and `pass`
/// is false.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub claim: String,
    pub check: String,
    pub params: Params,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub hypothesis_met: bool,
    pub note: String,
}

impl Report {
    pub fn new(claim: &str, check: &str, params: Params, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            claim: claim.to_string(),
            check: check.to_string(),
            params,
            lhs,
            rhs,
            margin,
            tolerance,
            pass: margin >= -tolerance,
            hypothesis_met: true,
            note: String::new(),
        }
    }

    /// Report for a configuration outside the claim's hypothesis.
    pub fn unmet(claim: &str, check: &str, params: Params, note: impl Into<String>) -> Self {
        Self {
            claim: claim.to_string(),
            check: check.to_string(),
            params,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            tolerance: 0.0,
            pass: false,
            hypothesis_met: false,
            note: note.into(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Relative margin `margin / max(|lhs|, |rhs|)`.
    pub fn relative_margin(&self) -> f64 {
        self.margin / self.lhs.abs().max(self.rhs.abs()).max(f64::MIN_POSITIVE)
    }
}

#[derive(Serialize)]
struct Row<'a> {
    claim: &'a str,
    check: &'a str,
    body: &'a str,
    d: usize,
    t: Option<f64>,
    n: Option<usize>,
    seed: u64,
    lhs: f64,
    rhs: f64,
    margin: f64,
    tolerance: f64,
    pass: bool,
    hypothesis_met: bool,
    note: &'a str,
}

pub fn write_csv<W: Write>(out: W, reports: &[Report]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(Row {
            claim: &r.claim,
            check: &r.check,
            body: &r.params.body,
            d: r.params.d,
            t: r.params.t,
            n: r.params.n,
            seed: r.params.seed,
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
            tolerance: r.tolerance,
            pass: r.pass,
            hypothesis_met: r.hypothesis_met,
            note: &r.note,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(out: W, reports: &[Report]) -> Result<()> {
    serde_json::to_writer_pretty(out, reports)?;
    Ok(())
}

/// Markdown summary: one row per claim with counts and the worst margin,
/// followed by the failing and hypothesis-unmet checks.
pub fn markdown_summary(reports: &[Report]) -> String {
    let mut claims: Vec<&str> = reports.iter().map(|r| r.claim.as_str()).collect();
    claims.sort_unstable();
    claims.dedup();
    let mut s = String::from("| claim | checks | pass | fail | unmet | worst relative margin |\n|---|---|---|---|---|---|\n");
    for c in &claims {
        let rs: Vec<&Report> = reports.iter().filter(|r| r.claim == *c).collect();
        let met: Vec<&&Report> = rs.iter().filter(|r| r.hypothesis_met).collect();
        let pass = met.iter().filter(|r| r.pass).count();
        let worst = met.iter().map(|r| r.relative_margin()).fold(f64::INFINITY, f64::min);
        let worst = if worst.is_finite() { format!("{worst:.3e}") } else { "-".into() };
        s.push_str(&format!(
            "| {c} | {} | {pass} | {} | {} | {worst} |\n",
            rs.len(),
            met.len() - pass,
            rs.len() - met.len()
        ));
    }
    let odd: Vec<&Report> = reports.iter().filter(|r| !r.pass).collect();
    if !odd.is_empty() {
        s.push_str("\n| claim | check | body | d | lhs | rhs | note |\n|---|---|---|---|---|---|---|\n");
        for r in odd {
            s.push_str(&format!(
                "| {} | {} | {} | {} | {:.6e} | {:.6e} | {} |\n",
                r.claim, r.check, r.params.body, r.params.d, r.lhs, r.rhs, r.note
            ));
        }
    }
    s
}
