pub mod field;
pub mod forerunner;
pub mod oracle;
pub mod reproduce;

use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use stepwave::forerunner::{crossover_position, onset_bound};
use stepwave::wavefield::{
    self, psi_decomposed, psi_transient_pulse, source_value, stationary_density, FieldGrid,
};
use stepwave::{Complex64, Regime, SourceScenario};

use crate::error::{CliError, CliResult};
use crate::format::{write_text, Format, Table};

pub const FIELD_HEADER: &[&str] = &[
    "x",
    "t",
    "re_psi",
    "im_psi",
    "density",
    "stationary_density",
];

/// Which wave function a cut samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Exact,
    /// Stationary part plus transient pulse.
    Decomposition,
    /// Transient pulse alone.
    Pulse,
}

impl Model {
    pub fn parse(value: &str) -> CliResult<Self> {
        match value {
            "exact" => Ok(Model::Exact),
            "decomposition" => Ok(Model::Decomposition),
            "pulse" => Ok(Model::Pulse),
            other => Err(CliError::Usage(format!(
                "model must be exact, decomposition or pulse, got `{other}`"
            ))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Model::Exact => "exact",
            Model::Decomposition => "decomposition",
            Model::Pulse => "pulse",
        }
    }

    /// Pulse-based models only exist below the barrier.
    pub fn check(self, s: &SourceScenario) -> CliResult<()> {
        if self != Model::Exact {
            s.require_regime(Regime::Below)?;
        }
        Ok(())
    }

    /// Field value; at the source the pulse vanishes.
    pub fn value(self, x: f64, t: f64, s: &SourceScenario) -> stepwave::Result<Complex64> {
        match self {
            Model::Exact => wavefield::psi(x, t, s),
            Model::Decomposition if x == 0.0 => Ok(source_value(t, s)),
            Model::Decomposition => Ok(psi_decomposed(x, t, s)?.sum),
            Model::Pulse if x == 0.0 => Ok(Complex64::new(0.0, 0.0)),
            Model::Pulse => psi_transient_pulse(x, t, s),
        }
    }

    pub fn space_cut(self, s: &SourceScenario, t: f64, xs: &[f64]) -> CliResult<FieldGrid> {
        self.check(s)?;
        Ok(FieldGrid::space_cut_with(s, t, xs, |x, t, s| {
            self.value(x, t, s)
        })?)
    }

    pub fn time_cut(self, s: &SourceScenario, x: f64, ts: &[f64]) -> CliResult<FieldGrid> {
        self.check(s)?;
        Ok(FieldGrid::time_cut_with(s, x, ts, |x, t, s| {
            self.value(x, t, s)
        })?)
    }
}

pub fn field_table(grid: &FieldGrid) -> CliResult<Table> {
    let mut table = Table::new(FIELD_HEADER);
    for p in &grid.samples {
        table.push(vec![
            p.x,
            p.t,
            p.psi.re,
            p.psi.im,
            p.density,
            stationary_density(p.x, &grid.scenario)?,
        ]);
    }
    Ok(table)
}

/// Writes `table` as `dir/stem.ext` and returns the file name.
pub fn emit(dir: &Path, stem: &str, table: &Table, format: Format) -> CliResult<String> {
    let name = format!("{stem}.{}", format.extension());
    write_text(&dir.join(&name), &table.render(format))?;
    Ok(name)
}

/// Shortest round-trip rendering, used in file names.
pub fn tag(v: f64) -> String {
    format!("{v}")
}

/// Arrow positions for a space cut at `t`.
pub fn space_markers(s: &SourceScenario, t: f64) -> CliResult<Value> {
    let v = s.group_velocity();
    Ok(match s.regime {
        Regime::Above => json!({ "x_sc": v * t }),
        Regime::Below => {
            let x0 = onset_bound(s)?;
            let x_r = if t > x0 / v {
                crossover_position(t, s).ok()
            } else {
                None
            };
            json!({ "X0": x0, "x_m": v * t, "X_R": x_r })
        }
    })
}

/// Arrival times for a time cut at `x`.
pub fn time_markers(s: &SourceScenario, x: f64) -> Value {
    let arrival = x / s.group_velocity();
    match s.regime {
        Regime::Above => json!({ "t_sc": arrival }),
        Regime::Below => json!({ "tau": arrival, "t_m": arrival / 3f64.sqrt() }),
    }
}

pub fn scenario_json(s: &SourceScenario) -> Value {
    json!({
        "units": s.units.label,
        "hbar": s.units.hbar,
        "mass": s.units.mass,
        "V0": s.v0,
        "E0": s.e0,
        "regime": s.regime,
        "wavenumber": s.wavenumber(),
        "group_velocity": s.group_velocity(),
    })
}

pub fn write_manifest(dir: &Path, name: &str, value: &Value) -> CliResult<PathBuf> {
    crate::format::write_json(&dir.join(name), value)
}
