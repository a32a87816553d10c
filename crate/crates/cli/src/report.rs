use std::io::Write;

use minl2::analysis::Verdict;
use serde::Deserialize;

/// CSV header; the column order is part of the output contract.
pub const COLUMNS: [&str; 8] = [
    "scenario",
    "operation",
    "quantity",
    "value",
    "bound",
    "gap",
    "verdict",
    "error_estimate",
];

/// Tolerances of expectations are multiplied by this in smoke mode.
pub const SMOKE_WIDEN: f64 = 1e3;

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub scenario: String,
    pub operation: String,
    pub quantity: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub gap: Option<f64>,
    pub verdict: Verdict,
    pub error_estimate: Option<f64>,
}

impl Row {
    pub fn value(quantity: impl Into<String>, value: f64) -> Row {
        Row {
            scenario: String::new(),
            operation: String::new(),
            quantity: quantity.into(),
            value,
            bound: None,
            gap: None,
            verdict: Verdict::NotApplicable,
            error_estimate: None,
        }
    }

    /// `value ≤ bound`, gap `bound − value`.
    pub fn bounded(quantity: impl Into<String>, value: f64, bound: f64, verdict: Verdict) -> Row {
        Row {
            bound: Some(bound),
            gap: Some(bound - value),
            verdict,
            ..Row::value(quantity, value)
        }
    }

    pub fn with_error(mut self, e: f64) -> Row {
        self.error_estimate = Some(e);
        self
    }

    pub fn with_verdict(mut self, v: Verdict) -> Row {
        self.verdict = v;
        self
    }

    fn numbers(&self) -> [Option<f64>; 4] {
        [Some(self.value), self.bound, self.gap, self.error_estimate]
    }

    pub fn is_finite(&self) -> bool {
        self.numbers().iter().flatten().all(|x| x.is_finite())
    }

    fn field(&self, f: Field) -> Option<f64> {
        match f {
            Field::Value => Some(self.value),
            Field::Bound => self.bound,
            Field::Gap => self.gap,
            Field::GapRel => self.gap.zip(self.bound).map(|(g, b)| g / b.abs()),
            Field::ErrorEstimate => self.error_estimate,
        }
    }
}

/// Floating-point output with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record([
            r.scenario.clone(),
            r.operation.clone(),
            r.quantity.clone(),
            num(r.value),
            opt(r.bound),
            opt(r.gap),
            r.verdict.as_str().to_string(),
            opt(r.error_estimate),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One JSON object per row; numbers keep the CSV formatting.
pub fn write_jsonl<W: Write>(rows: &[Row], mut out: W) -> std::io::Result<()> {
    let s = |x: &str| serde_json::to_string(x).expect("string serialisation");
    let n = |x: Option<f64>| x.map(num).unwrap_or_else(|| "null".into());
    for r in rows {
        writeln!(
            out,
            "{{\"scenario\":{},\"operation\":{},\"quantity\":{},\"value\":{},\"bound\":{},\"gap\":{},\"verdict\":{},\"error_estimate\":{}}}",
            s(&r.scenario),
            s(&r.operation),
            s(&r.quantity),
            num(r.value),
            n(r.bound),
            n(r.gap),
            s(r.verdict.as_str()),
            n(r.error_estimate),
        )?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    #[default]
    Value,
    Bound,
    Gap,
    /// `gap / |bound|`.
    GapRel,
    ErrorEstimate,
}

/// An asserted property of the row named `quantity`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    pub quantity: String,
    #[serde(default)]
    pub field: Field,
    pub equals: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub verdict: Option<Verdict>,
}

impl Expect {
    pub fn validate(&self) -> Result<(), String> {
        for (name, t) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if let Some(t) = t {
                if !(t > 0.0) {
                    return Err(format!("expect {}: {name} must be > 0", self.quantity));
                }
            }
        }
        if self.equals.is_some() && self.rel_tol.is_none() && self.abs_tol.is_none() {
            return Err(format!("expect {}: equals needs rel_tol or abs_tol", self.quantity));
        }
        if self.equals.is_none() && self.min.is_none() && self.max.is_none() && self.verdict.is_none() {
            return Err(format!("expect {}: nothing to check", self.quantity));
        }
        Ok(())
    }

    /// Failure message, or `None` when the expectation holds.
    pub fn check(&self, rows: &[Row], smoke: bool) -> Option<String> {
        let Some(row) = rows.iter().find(|r| r.quantity == self.quantity) else {
            return Some(format!("no row named {}", self.quantity));
        };
        let widen = if smoke { SMOKE_WIDEN } else { 1.0 };
        if let Some(v) = self.verdict {
            if row.verdict != v {
                return Some(format!(
                    "{}: verdict {} (want {})",
                    self.quantity,
                    row.verdict.as_str(),
                    v.as_str()
                ));
            }
        }
        if self.equals.is_none() && self.min.is_none() && self.max.is_none() {
            return None;
        }
        let Some(x) = row.field(self.field) else {
            return Some(format!("{}: field {:?} is empty", self.quantity, self.field));
        };
        if let Some(want) = self.equals {
            let tol = self
                .abs_tol
                .unwrap_or(0.0)
                .max(self.rel_tol.unwrap_or(0.0) * want.abs())
                * widen;
            if !((x - want).abs() <= tol) {
                return Some(format!(
                    "{}: {:?} = {} differs from {} by more than {}",
                    self.quantity,
                    self.field,
                    num(x),
                    num(want),
                    num(tol)
                ));
            }
        }
        if let Some(lo) = self.min {
            if !(x >= lo) {
                return Some(format!(
                    "{}: {:?} = {} below {}",
                    self.quantity,
                    self.field,
                    num(x),
                    num(lo)
                ));
            }
        }
        if let Some(hi) = self.max {
            if !(x <= hi) {
                return Some(format!(
                    "{}: {:?} = {} above {}",
                    self.quantity,
                    self.field,
                    num(x),
                    num(hi)
                ));
            }
        }
        None
    }
}
