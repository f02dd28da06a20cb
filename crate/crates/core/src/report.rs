//! Report emitters: JSON with 17 significant digits, CSV and markdown.
//!
//! Divergent values print as `{"status":"divergent"}` in JSON and `inf` in
//! CSV; NaN prints as `null` and an empty cell.

use std::str::FromStr;

use serde_json::{json, Map, Number, Value};

use crate::quadrature::{FunctionalValue, Status};
use crate::verify::InequalityReport;

/// Output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Markdown),
            other => Err(format!("unknown format `{other}` (expected json, csv or md)")),
        }
    }
}

/// `x` with 17 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Number::from_str(&format!("{x:.16e}"))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// Text form used in CSV and markdown cells.
pub fn cell(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Finite => "finite",
        Status::Divergent => "divergent",
        Status::Inconclusive => "inconclusive",
    }
}

pub fn value_json(v: &FunctionalValue) -> Value {
    match v.status {
        Status::Divergent => json!({"status": "divergent"}),
        s => json!({
            "status": status_str(s),
            "value": num(v.value),
            "error_estimate": num(v.error_estimate),
            "node_count": v.node_count,
        }),
    }
}

/// `inf` for divergent values, the number otherwise, empty if inconclusive.
pub fn value_cell(v: &FunctionalValue) -> String {
    match v.status {
        Status::Divergent => "inf".into(),
        Status::Finite => cell(v.value),
        Status::Inconclusive => String::new(),
    }
}

pub fn status_cell(v: &FunctionalValue) -> &'static str {
    status_str(v.status)
}

pub fn report_json(r: &InequalityReport) -> Value {
    let mut m = Map::new();
    m.insert("check_name".into(), Value::String(r.check_name.clone()));
    m.insert("inputs".into(), r.inputs.clone());
    m.insert("lhs".into(), num(r.lhs));
    m.insert("rhs".into(), num(r.rhs));
    m.insert("slack".into(), num(r.slack));
    m.insert("verdict".into(), Value::String(r.verdict.as_str().into()));
    if let Some(reason) = r.verdict.skip_reason() {
        m.insert("skip_reason".into(), Value::String(reason.into()));
    }
    m.insert("tolerance".into(), num(r.tolerance_used));
    Value::Object(m)
}

/// Verdict counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub observation: usize,
}

pub fn summarize(reports: &[InequalityReport]) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        match r.verdict.as_str() {
            "pass" => s.pass += 1,
            "fail" => s.fail += 1,
            "skipped" => s.skipped += 1,
            _ => s.observation += 1,
        }
    }
    s
}

pub fn suite_json(reports: &[InequalityReport]) -> Value {
    let s = summarize(reports);
    let skipped: Vec<Value> = reports
        .iter()
        .filter_map(|r| {
            r.verdict
                .skip_reason()
                .map(|why| json!({"check_name": r.check_name, "reason": why, "inputs": r.inputs}))
        })
        .collect();
    json!({
        "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
        "summary": {
            "pass": s.pass,
            "fail": s.fail,
            "skipped": s.skipped,
            "observation": s.observation,
            "skipped_checks": skipped,
        },
    })
}

/// Rows of strings with a header, rendered to CSV or markdown.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> crate::error::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| crate::error::Error::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| crate::error::Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_markdown(&self) -> String {
        let esc = |s: &str| s.replace('|', "\\|");
        let mut out = format!("| {} |\n", self.header.iter().map(|h| esc(h)).collect::<Vec<_>>().join(" | "));
        out.push_str(&format!("|{}\n", "---|".repeat(self.header.len())));
        for r in &self.rows {
            out.push_str(&format!("| {} |\n", r.iter().map(|c| esc(c)).collect::<Vec<_>>().join(" | ")));
        }
        out
    }

    /// Each row as an object keyed by the header.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    Value::Object(
                        self.header
                            .iter()
                            .zip(r)
                            .map(|(h, c)| (h.clone(), Value::String(c.clone())))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

pub fn suite_table(reports: &[InequalityReport]) -> Table {
    let mut t = Table::new(["check_name", "verdict", "lhs", "rhs", "slack", "tolerance", "skip_reason", "inputs"]);
    for r in reports {
        t.push(vec![
            r.check_name.clone(),
            r.verdict.as_str().into(),
            cell(r.lhs),
            cell(r.rhs),
            cell(r.slack),
            cell(r.tolerance_used),
            r.verdict.skip_reason().unwrap_or("").into(),
            r.inputs.to_string(),
        ]);
    }
    t
}

/// Pretty JSON text with a trailing newline.
pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2f64.sqrt() * 1e-300, 6.02214076e23, -7.25] {
            let v = num(x);
            let back: f64 = v.to_string().parse().unwrap();
            assert_eq!(back, x);
        }
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn divergent_tokens() {
        let d = FunctionalValue::divergent(0);
        assert_eq!(value_json(&d), json!({"status": "divergent"}));
        assert_eq!(value_cell(&d), "inf");
    }

    #[test]
    fn markdown_shape() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec!["1".into(), "x|y".into()]);
        assert_eq!(t.to_markdown(), "| a | b |\n|---|---|\n| 1 | x\\|y |\n");
        assert_eq!(Table::new(["a"]).to_csv().unwrap(), "a\n");
    }
}
