//! Serializers for scan results: CSV, JSON and two-column plot data.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::methods::Method;
use crate::scanner::{Factor, ScanResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

pub const CSV_HEADER: &str = "j,normalized,classified,arithmetic_check";

fn fmt_normalized(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.9}"),
        None => "NaN".to_string(),
    }
}

pub fn render_csv(result: &ScanResult) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &result.records {
        writeln!(
            out,
            "{},{},{},{}",
            r.j,
            fmt_normalized(r.normalized),
            r.classified,
            r.arithmetic_check
        )
        .unwrap();
    }
    out
}

pub fn render_json(result: &ScanResult) -> String {
    let mut out = serde_json::to_string_pretty(result).expect("scan results always serialize");
    out.push('\n');
    out
}

pub fn parse_json(text: &str) -> std::result::Result<ScanResult, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn render_plot_data(result: &ScanResult) -> String {
    let meta = &result.metadata;
    let mut out = format!(
        "# N={} method={} M={}\n# j normalized\n",
        meta.n, meta.method, meta.m
    );
    for r in &result.records {
        let value = match r.normalized {
            Some(v) => format!("{v:.9}"),
            None => "nan".to_string(),
        };
        writeln!(out, "{} {}", r.j, value).unwrap();
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn emit_results(result: &ScanResult, format: OutputFormat, path: &Path) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => render_csv(result),
        OutputFormat::Json => render_json(result),
    };
    write(path, &text)
}

pub fn emit_plot_data(result: &ScanResult, path: &Path) -> Result<()> {
    write(path, &render_plot_data(result))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub n: u64,
    pub method: Method,
    pub m: u64,
    pub factors: Vec<Factor>,
}

impl FactorizationReport {
    /// `52882363 = 67 × 79 × 97 × 103`, with `p^k` for repeated factors.
    pub fn summary(&self) -> String {
        let terms: Vec<String> = self
            .factors
            .iter()
            .map(|f| match f.multiplicity {
                1 => f.value.to_string(),
                k => format!("{}^{}", f.value, k),
            })
            .collect();
        format!("{} = {}", self.n, terms.join(" × "))
    }

    pub fn product(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, f| {
            acc.checked_mul(f.value.checked_pow(f.multiplicity)?)
        })
    }
}

pub fn render_factors_csv(report: &FactorizationReport) -> String {
    let mut out = String::from("factor,multiplicity,kind\n");
    for f in &report.factors {
        let kind = match f.kind {
            crate::scanner::FactorKind::Prime => "prime",
            crate::scanner::FactorKind::Unresolved => "unresolved",
        };
        writeln!(out, "{},{},{}", f.value, f.multiplicity, kind).unwrap();
    }
    out
}

pub fn emit_factors(report: &FactorizationReport, format: OutputFormat, path: &Path) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => render_factors_csv(report),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
            s.push('\n');
            s
        }
    };
    write(path, &text)
}
