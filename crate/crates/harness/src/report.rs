//! Per-task reports and their JSON / CSV serialisation.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};
use zerolab_core::formulas::SidePair;
use zerolab_core::Complex64;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Informational,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

impl From<f64> for ComplexValue {
    fn from(v: f64) -> Self {
        ComplexValue { re: v, im: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct TruncationBudgets {
    pub zero_side: f64,
    pub arithmetic_side: f64,
}

/// One task's outcome. Field order is the serialisation order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub task_id: String,
    pub parameters: Map<String, Value>,
    pub lhs: ComplexValue,
    pub rhs: ComplexValue,
    pub abs_err: f64,
    pub rel_err: f64,
    pub uncertainty_envelope: f64,
    pub truncation_budgets: TruncationBudgets,
    pub zeros_used: u64,
    pub terms_used: u64,
    pub runtime_ms: u64,
    pub verdict: Verdict,
}

fn relative(abs_err: f64, rhs: Complex64) -> f64 {
    if rhs.norm() > 0.0 {
        abs_err / rhs.norm()
    } else if abs_err == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

impl Report {
    pub fn new(task_id: String, parameters: Map<String, Value>, lhs: Complex64, rhs: Complex64) -> Self {
        let abs_err = (lhs - rhs).norm();
        Report {
            task_id,
            parameters,
            lhs: lhs.into(),
            rhs: rhs.into(),
            abs_err,
            rel_err: relative(abs_err, rhs),
            uncertainty_envelope: 0.0,
            truncation_budgets: TruncationBudgets::default(),
            zeros_used: 0,
            terms_used: 0,
            runtime_ms: 0,
            verdict: Verdict::Informational,
        }
    }

    /// Report for an identity; passes when the residual fits the budgets.
    pub fn from_sides(task_id: String, parameters: Map<String, Value>, s: &SidePair) -> Self {
        let mut r = Report::new(task_id, parameters, s.zero_side, s.arithmetic_side);
        r.uncertainty_envelope = s.envelope;
        r.truncation_budgets = TruncationBudgets {
            zero_side: s.zero_truncation_bound,
            arithmetic_side: s.term_truncation_bound,
        };
        r.zeros_used = s.zeros_used as u64;
        r.terms_used = s.terms_used;
        r.verdict = r.budget_verdict();
        r
    }

    pub fn budget(&self) -> f64 {
        self.uncertainty_envelope + self.truncation_budgets.zero_side + self.truncation_budgets.arithmetic_side
    }

    pub fn budget_verdict(&self) -> Verdict {
        if self.abs_err <= self.budget() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn gated_failure(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

/// Reports as a JSON array, keys in declaration order.
pub fn to_json(reports: &[Report]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(reports)?;
    s.push('\n');
    Ok(s)
}

/// The same reports with `runtime_ms` zeroed, for run-to-run comparison.
pub fn numeric_fingerprint(reports: &[Report]) -> Result<String> {
    let stripped: Vec<Report> = reports
        .iter()
        .map(|r| Report {
            runtime_ms: 0,
            ..r.clone()
        })
        .collect();
    to_json(&stripped)
}

const CSV_HEADER: [&str; 15] = [
    "task_id",
    "parameters",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "abs_err",
    "rel_err",
    "uncertainty_envelope",
    "zero_side_budget",
    "arithmetic_side_budget",
    "zeros_used",
    "terms_used",
    "runtime_ms",
    "verdict",
];

/// One row per report; parameters are embedded as a JSON object.
pub fn write_csv<W: Write>(reports: &[Report], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in reports {
        let verdict = match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Informational => "informational",
        };
        w.write_record([
            r.task_id.clone(),
            serde_json::to_string(&r.parameters)?,
            r.lhs.re.to_string(),
            r.lhs.im.to_string(),
            r.rhs.re.to_string(),
            r.rhs.im.to_string(),
            r.abs_err.to_string(),
            r.rel_err.to_string(),
            r.uncertainty_envelope.to_string(),
            r.truncation_budgets.zero_side.to_string(),
            r.truncation_budgets.arithmetic_side.to_string(),
            r.zeros_used.to_string(),
            r.terms_used.to_string(),
            r.runtime_ms.to_string(),
            verdict.to_string(),
        ])?;
    }
    w.flush().map_err(|e| crate::error::HarnessError::io("csv output", e))?;
    Ok(())
}
