//! Flat `key = value` run configuration with strict key checking.
//!
//! Sources are layered: built-in defaults, then the `--config` file, then
//! global flags, then per-command `--key value` overrides.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use stepwave::{SourceScenario, UnitSystem};

use crate::error::{CliError, CliResult};
use crate::format::Format;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "STEPWAVE_OUT_DIR";

pub const COMMON_KEYS: &[&str] = &["units", "V0", "E0", "mass", "format", "out"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Field,
    Forerunner,
    Oracle,
    Reproduce,
}

impl CommandKind {
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            CommandKind::Field => &[
                "axis", "model", "t", "x", "x_min", "x_max", "nx", "t_min", "t_max", "nt",
            ],
            CommandKind::Forerunner => &["x_f", "t_f", "xr_times", "t0", "etas", "numeric"],
            CommandKind::Oracle => &[
                "L",
                "nx",
                "dt",
                "n_steps",
                "x_window",
                "source_amplitude",
                "tolerance_cn",
                "tolerance_talbot",
                "talbot_stride",
                "boundary",
            ],
            CommandKind::Reproduce => &["figure", "points"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Field => "field",
            CommandKind::Forerunner => "forerunner",
            CommandKind::Oracle => "oracle",
            CommandKind::Reproduce => "reproduce",
        }
    }

    fn accepts(self, key: &str) -> bool {
        COMMON_KEYS.contains(&key) || self.keys().contains(&key)
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    values: BTreeMap<String, String>,
}

/// Parses the text of a config file.
pub fn parse_text(text: &str, origin: &str) -> CliResult<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("{origin}:{}: expected `key = value`", n + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Usage(format!(
                "{origin}:{}: empty key or value",
                n + 1
            )));
        }
        if out.iter().any(|(k, _)| k == key) {
            return Err(CliError::Usage(format!(
                "{origin}:{}: duplicate key `{key}`",
                n + 1
            )));
        }
        out.push((key.to_owned(), value.to_owned()));
    }
    Ok(out)
}

/// Parses `--key value` / `--key=value` overrides.
pub fn parse_overrides(args: &[String]) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let arg = &args[i];
        let body = arg.strip_prefix("--").ok_or_else(|| {
            CliError::Usage(format!(
                "unexpected argument `{arg}` (overrides look like --key value)"
            ))
        })?;
        if let Some((key, value)) = body.split_once('=') {
            out.push((key.to_owned(), value.to_owned()));
            i += 1;
        } else {
            let value = args
                .get(i + 1)
                .ok_or_else(|| CliError::Usage(format!("missing value for --{body}")))?;
            out.push((body.to_owned(), value.clone()));
            i += 2;
        }
    }
    Ok(out)
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        Self {
            command,
            values: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        if !self.command.accepts(key) {
            return Err(CliError::Usage(format!(
                "unknown key `{key}` for `{}` (accepted: {})",
                self.command.name(),
                COMMON_KEYS
                    .iter()
                    .chain(self.command.keys())
                    .copied()
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        self.values.insert(key.to_owned(), value.to_owned());
        Ok(())
    }

    pub fn apply(&mut self, pairs: Vec<(String, String)>) -> CliResult<()> {
        for (k, v) in pairs {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> CliResult<()> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let pairs = parse_text(&text, &path.display().to_string())?;
        self.apply(pairs)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> CliResult<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => parse_f64(key, v),
        }
    }

    pub fn f64_opt(&self, key: &str) -> CliResult<Option<f64>> {
        self.raw(key).map(|v| parse_f64(key, v)).transpose()
    }

    pub fn positive_or(&self, key: &str, default: f64) -> CliResult<f64> {
        let v = self.f64_or(key, default)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(CliError::Usage(format!(
                "`{key}` must be positive, got {v}"
            )))
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> CliResult<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| {
                CliError::Usage(format!("`{key}` must be a non-negative integer, got `{v}`"))
            }),
        }
    }

    /// Sample count of at least 2.
    pub fn count_or(&self, key: &str, default: usize) -> CliResult<usize> {
        let n = self.usize_or(key, default)?;
        if n < 2 {
            return Err(CliError::Usage(format!(
                "`{key}` must be at least 2, got {n}"
            )));
        }
        Ok(n)
    }

    pub fn list_or(&self, key: &str, default: &[f64]) -> CliResult<Vec<f64>> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|item| parse_f64(key, item.trim()))
                .collect(),
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> CliResult<bool> {
        match self.raw(key) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(v) => Err(CliError::Usage(format!(
                "`{key}` must be true or false, got `{v}`"
            ))),
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.raw(key).unwrap_or(default)
    }

    pub fn format(&self) -> CliResult<Format> {
        Format::parse(self.str_or("format", "csv"))
    }

    pub fn units(&self) -> CliResult<UnitSystem> {
        let label = self.str_or("units", "ev-nm-fs");
        let units = UnitSystem::by_label(label).map_err(|e| CliError::Usage(e.to_string()))?;
        match self.f64_opt("mass")? {
            None => Ok(units),
            Some(m) => units
                .with_mass(m)
                .map_err(|e| CliError::Usage(e.to_string())),
        }
    }

    /// Scenario from `units`, `V0`, `E0` and `mass`; defaults are the
    /// below-barrier case V0 = 1, E0 = 0.5.
    pub fn scenario(&self) -> CliResult<SourceScenario> {
        let units = self.units()?;
        let v0 = self.f64_or("V0", 1.0)?;
        let e0 = self.f64_or("E0", 0.5)?;
        SourceScenario::new(units, v0, e0).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// `out` key, then the environment, then the working directory.
    pub fn out_dir(&self) -> PathBuf {
        if let Some(dir) = self.raw("out") {
            return PathBuf::from(dir);
        }
        match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => PathBuf::from("."),
        }
    }
}

fn parse_f64(key: &str, value: &str) -> CliResult<f64> {
    let v: f64 = value
        .parse()
        .map_err(|_| CliError::Usage(format!("`{key}` must be a number, got `{value}`")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!(
            "`{key}` must be finite, got `{value}`"
        )));
    }
    Ok(v)
}

/// `n` evenly spaced points on `[a, b]`, both ends included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Checks `0 <= lo < hi` (or `0 < lo` when `strict_lo`).
pub fn ordered_range(name: &str, lo: f64, hi: f64, strict_lo: bool) -> CliResult<()> {
    let lo_ok = if strict_lo { lo > 0.0 } else { lo >= 0.0 };
    if !lo_ok || lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::Usage(format!(
            "{name} range [{lo}, {hi}] must be ordered and {}",
            if strict_lo {
                "positive"
            } else {
                "non-negative"
            }
        )));
    }
    Ok(())
}
