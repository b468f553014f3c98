//! Report rendering as text, JSON or CSV.
//!
//! Counts are always written as exact decimal strings, including in JSON.

use std::fmt;

use serde::Serialize;

use super::eval::Method;
use crate::graph::LabeledGraph;
use crate::Count;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Match,
    Mismatch,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphSummary {
    pub fn of(g: &LabeledGraph) -> Self {
        GraphSummary {
            n: g.vertex_count(),
            m: g.edge_count(),
            edges: g.edges().iter().map(|e| [e.lo(), e.hi()]).collect(),
        }
    }
}

/// Outcome of one action.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub name: String,
    pub method: Method,
    /// For `sequence` actions, the last term.
    pub count: Count,
    pub graph: GraphSummary,
    pub elapsed_ms: f64,
    /// Present exactly for `verify` actions.
    pub verdict: Option<Verdict>,
    /// Present exactly for `sequence` actions.
    pub sequence: Option<Vec<Count>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!(
                "unknown format `{other}` (expected text, json or csv)"
            )),
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    name: &'a str,
    method: &'static str,
    count: String,
    graph: &'a GraphSummary,
    elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sequence: Option<Vec<String>>,
}

fn millis(ms: f64) -> f64 {
    (ms * 1000.0).round() / 1000.0
}

fn join(seq: &[Count]) -> String {
    seq.iter()
        .map(Count::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Serializes reports. Output is newline-terminated and deterministic for
/// equal reports.
pub fn format_report(reports: &[Report], format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&format!(
                    "{}\t{}\t{}\tn={}\tm={}",
                    r.name, r.method, r.count, r.graph.n, r.graph.m
                ));
                if let Some(v) = r.verdict {
                    out.push_str(&format!("\tverdict={v}"));
                }
                if let Some(seq) = &r.sequence {
                    out.push_str(&format!("\tsequence={}", join(seq)));
                }
                out.push_str(&format!("\telapsed_ms={:.3}\n", r.elapsed_ms));
            }
            out
        }
        Format::Json => {
            let rows: Vec<JsonReport<'_>> = reports
                .iter()
                .map(|r| JsonReport {
                    name: &r.name,
                    method: r.method.name(),
                    count: r.count.to_string(),
                    graph: &r.graph,
                    elapsed_ms: millis(r.elapsed_ms),
                    verdict: r.verdict.map(|v| v.name()),
                    sequence: r
                        .sequence
                        .as_ref()
                        .map(|s| s.iter().map(Count::to_string).collect()),
                })
                .collect();
            // one compact object per line
            if rows.is_empty() {
                return "[]\n".to_string();
            }
            let lines: Vec<String> = rows
                .iter()
                .map(|r| serde_json::to_string(r).expect("reports serialize"))
                .collect();
            format!("[\n{}\n]\n", lines.join(",\n"))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["name", "method", "count", "vertices", "edges", "elapsed_ms"])
                .expect("in-memory write");
            for r in reports {
                w.write_record([
                    r.name.clone(),
                    r.method.name().to_string(),
                    r.count.to_string(),
                    r.graph.n.to_string(),
                    r.graph.m.to_string(),
                    format!("{:.3}", r.elapsed_ms),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
        }
    }
}
