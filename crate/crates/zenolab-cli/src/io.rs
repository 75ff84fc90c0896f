//! Output plumbing: RFC-4180 CSV with 17-significant-digit floats, plus a
//! provenance JSON sidecar next to every artifact.

use crate::CliError;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Format a float with 17 significant digits ('.' decimal separator).
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{v:.16e}")
}

/// Quote a CSV field per RFC 4180 when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One table cell, kept typed so the same document renders as CSV or JSON.
#[derive(Clone)]
pub enum Cell {
    S(String),
    F(f64),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

pub struct CsvDoc {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl CsvDoc {
    pub fn new(header: &[&str]) -> Self {
        CsvDoc { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, fields: Vec<Cell>) {
        debug_assert_eq!(fields.len(), self.header.len());
        self.rows.push(fields);
    }

    pub fn render(&self) -> String {
        let mut lines = vec![self.header.join(",")];
        for r in &self.rows {
            lines.push(
                r.iter()
                    .map(|c| match c {
                        Cell::S(s) => csv_field(s),
                        Cell::F(v) => fmt_f64(*v),
                    })
                    .collect::<Vec<_>>()
                    .join(","),
            );
        }
        let mut s = lines.join("\r\n");
        s.push_str("\r\n");
        s
    }

    pub fn render_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut obj = serde_json::Map::new();
                for (h, c) in self.header.iter().zip(r.iter()) {
                    let v = match c {
                        Cell::S(s) => serde_json::Value::String(s.clone()),
                        Cell::F(x) if x.is_finite() => serde_json::json!(x),
                        Cell::F(x) => serde_json::Value::String(fmt_f64(*x)),
                    };
                    obj.insert(h.clone(), v);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("rows JSON");
        s.push('\n');
        s
    }

    /// CSV by default, JSON rows when requested.
    pub fn render_as(&self, json: bool) -> String {
        if json {
            self.render_json()
        } else {
            self.render()
        }
    }
}

/// Provenance recorded next to every output file.
#[derive(serde::Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command_line: Vec<String>,
    pub seed: u64,
    pub tolerances: zenolab::Tolerances,
    pub inputs_sha256: String,
    pub threads_cap: Option<String>,
}

impl Provenance {
    pub fn new(seed: u64, tol: zenolab::Tolerances, input_payload: &[u8]) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(input_payload);
        Provenance {
            tool: "zenolab",
            version: env!("CARGO_PKG_VERSION"),
            command_line: std::env::args().collect(),
            seed,
            tolerances: tol,
            inputs_sha256: hex::encode(hasher.finalize()),
            threads_cap: std::env::var("ZENOLAB_THREADS").ok(),
        }
    }
}

/// Write `content` to `out` (or stdout when `None`), with a `.provenance.json`
/// sidecar for file outputs.
pub fn emit(out: Option<&Path>, content: &str, prov: &Provenance) -> Result<(), CliError> {
    match out {
        None => {
            print!("{content}");
            std::io::stdout().flush()?;
        }
        Some(path) => {
            std::fs::write(path, content)?;
            let sidecar: PathBuf = {
                let mut os = path.as_os_str().to_owned();
                os.push(".provenance.json");
                os.into()
            };
            std::fs::write(sidecar, serde_json::to_string_pretty(prov).expect("provenance JSON"))?;
        }
    }
    Ok(())
}

/// Hash-stable description of the model inputs for provenance.
pub fn model_payload(builtin: Option<&str>, model_json: Option<&str>, extra: &str) -> Vec<u8> {
    let mut s = String::new();
    if let Some(b) = builtin {
        s.push_str("builtin:");
        s.push_str(b);
    }
    if let Some(m) = model_json {
        s.push_str("model:");
        s.push_str(m);
    }
    s.push_str(extra);
    s.into_bytes()
}
