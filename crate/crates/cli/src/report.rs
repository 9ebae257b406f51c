//! One report type rendered three ways.
//!
//! Floats go through Rust's shortest round-trip formatting in both CSV and
//! JSON, so re-parsing gives back the exact values.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::Format;

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub case: String,
    pub computed: Option<f64>,
    pub target: Option<f64>,
    pub abs_diff: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub expected_fail: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Row {
    pub fn value(case: impl Into<String>, computed: f64) -> Self {
        Row {
            case: case.into(),
            computed: Some(computed),
            target: None,
            abs_diff: None,
            pass: true,
            expected_fail: false,
            note: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    #[serde(skip)]
    pub title: String,
    /// CSV header names for the `case` and `computed` columns.
    #[serde(skip)]
    pub columns: (&'static str, &'static str),
    pub params: Map<String, Value>,
    pub results: Vec<Row>,
    pub summary: Map<String, Value>,
    /// Human-only lines such as wall-clock timings, kept out of the machine
    /// formats so they stay reproducible.
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            columns: ("case", "computed"),
            params: Map::new(),
            results: Vec::new(),
            summary: Map::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.params.insert(key.into(), v.into());
        self
    }

    pub fn summarize(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.summary.insert(key.into(), v.into());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.human(),
            Format::Csv => self.csv(),
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
        }
    }

    fn csv(&self) -> String {
        let mut s = format!("{},{},target,abs_diff,pass\n", self.columns.0, self.columns.1);
        for r in &self.results {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                csv_field(&r.case),
                opt(r.computed),
                opt(r.target),
                opt(r.abs_diff),
                r.pass
            );
        }
        s
    }

    fn human(&self) -> String {
        let mut s = format!("{}\n", self.title);
        if !self.params.is_empty() {
            let p: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect();
            let _ = writeln!(s, "  {}", p.join("  "));
        }
        let width = self.results.iter().map(|r| r.case.len()).max().unwrap_or(4).max(self.columns.0.len());
        let with_target = self.results.iter().any(|r| r.target.is_some());
        if with_target {
            let _ = writeln!(
                s,
                "{:width$}  {:>14}  {:>14}  {:>10}  result",
                self.columns.0, self.columns.1, "target", "abs_diff"
            );
        } else {
            let _ = writeln!(s, "{:width$}  {:>14}", self.columns.0, self.columns.1);
        }
        for r in &self.results {
            let computed = r.computed.map_or("-".to_string(), |v| format!("{v:.8}"));
            if with_target {
                let verdict = match (r.pass, r.expected_fail) {
                    (true, _) => "PASS",
                    (false, true) => "XFAIL",
                    (false, false) => "FAIL",
                };
                let target = r.target.map_or("-".to_string(), |v| v.to_string());
                let diff = r.abs_diff.map_or("-".to_string(), |v| format!("{v:.3e}"));
                let _ = writeln!(s, "{:width$}  {computed:>14}  {target:>14}  {diff:>10}  {verdict}", r.case);
            } else {
                let _ = writeln!(s, "{:width$}  {computed:>14}", r.case);
            }
            if let Some(n) = &r.note {
                let _ = writeln!(s, "{:width$}  note: {n}", "");
            }
        }
        if !self.summary.is_empty() {
            let p: Vec<String> = self.summary.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect();
            let _ = writeln!(s, "summary: {}", p.join("  "));
        }
        for n in &self.notes {
            let _ = writeln!(s, "{n}");
        }
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
