//! Deterministic text output: `%.17g` numbers, `\n` line endings.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

const SIGNIFICANT: i32 = 17;

/// C-style `%.17g`.
pub fn g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".to_owned();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_owned();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0" } else { "0" }.to_owned();
    }
    let sci = format!("{:.*e}", (SIGNIFICANT - 1) as usize, v);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent form");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if !(-4..SIGNIFICANT).contains(&exponent) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exponent.abs())
    } else {
        let decimals = (SIGNIFICANT - 1 - exponent) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn parse(value: &str) -> CliResult<Self> {
        match value {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Usage(format!(
                "format must be csv or json, got `{other}`"
            ))),
        }
    }
}

/// A numeric table written as CSV or as a JSON array of row objects.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|v| g17(*v)).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let mut out = String::from("[\n");
                for (i, row) in self.rows.iter().enumerate() {
                    let cells: Vec<String> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(k, v)| format!("\"{k}\": {}", json_number(*v)))
                        .collect();
                    out.push_str("  {");
                    out.push_str(&cells.join(", "));
                    out.push('}');
                    if i + 1 < self.rows.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str("]\n");
                out
            }
        }
    }
}

/// `%.17g`, or `null` where JSON has no literal.
fn json_number(v: f64) -> String {
    if v.is_finite() {
        let s = g17(v);
        if s == "-0" {
            "0".to_owned()
        } else {
            s
        }
    } else {
        "null".to_owned()
    }
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<PathBuf> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    Ok(path.to_path_buf())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Check(format!("cannot serialise {}: {e}", path.display())))?;
    text.push('\n');
    write_text(path, &text)
}
