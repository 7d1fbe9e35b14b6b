//! `reproduce`: data sets behind figures 1 to 7, in eV, nm and fs with the
//! free-electron mass.

use std::path::PathBuf;

use serde_json::{json, Value};
use stepwave::forerunner::{onset_bound, pulse_heights};
use stepwave::wavefield::{psi, pulse_density};
use stepwave::{SourceScenario, UnitSystem};

use super::{
    emit, field_table, scenario_json, space_markers, tag, time_markers, write_manifest, Model,
};
use crate::config::{linspace, RunConfig};
use crate::error::{CliError, CliResult};
use crate::format::{ensure_dir, Format, Table};

pub const MANIFEST: &str = "manifest.json";
pub const FIGURES: std::ops::RangeInclusive<u8> = 1..=7;

/// Step height shared by every figure, eV.
const V0: f64 = 1.0;
const E0_ABOVE: f64 = 2.0;
const E0_BELOW: f64 = 0.5;
/// Largest `|density - stationary|` accepted in the late figure 4 cut.
const FIG4_TOLERANCE: f64 = 0.01;

pub fn parse_figures(value: &str) -> CliResult<Vec<u8>> {
    if value == "all" {
        return Ok(FIGURES.collect());
    }
    match value.parse::<u8>() {
        Ok(n) if FIGURES.contains(&n) => Ok(vec![n]),
        _ => Err(CliError::Usage(format!(
            "figure must be 1 to 7 or all, got `{value}`"
        ))),
    }
}

struct Run {
    dir: PathBuf,
    format: Format,
    points: usize,
    above: SourceScenario,
    below: SourceScenario,
    entries: Vec<Value>,
    failures: Vec<String>,
}

impl Run {
    fn record(
        &mut self,
        figure: u8,
        stem: &str,
        table: &Table,
        description: String,
        extra: Value,
    ) -> CliResult<()> {
        let file = emit(&self.dir, stem, table, self.format)?;
        let mut entry = json!({
            "file": file,
            "figure": figure,
            "curve": stem,
            "provenance": description,
            "points": table.rows.len(),
        });
        if let (Value::Object(e), Value::Object(x)) = (&mut entry, extra) {
            e.extend(x);
        }
        self.entries.push(entry);
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn space(
        &mut self,
        figure: u8,
        stem: &str,
        model: Model,
        above: bool,
        t: f64,
        x_max: f64,
        what: &str,
    ) -> CliResult<Table> {
        let s = if above {
            self.above.clone()
        } else {
            self.below.clone()
        };
        let xs = linspace(0.0, x_max, self.points);
        let grid = model.space_cut(&s, t, &xs)?;
        let table = field_table(&grid)?;
        let extra = json!({
            "parameters": { "model": model.label(), "t": t, "x_min": 0.0, "x_max": x_max },
            "scenario": scenario_json(&s),
            "markers": space_markers(&s, t)?,
        });
        self.record(
            figure,
            stem,
            &table,
            format!("figure {figure}: {what}"),
            extra,
        )?;
        Ok(table)
    }

    #[allow(clippy::too_many_arguments)]
    fn time(
        &mut self,
        figure: u8,
        stem: &str,
        model: Model,
        above: bool,
        x: f64,
        t_range: (f64, f64),
        what: &str,
    ) -> CliResult<()> {
        let s = if above {
            self.above.clone()
        } else {
            self.below.clone()
        };
        let ts = linspace(t_range.0, t_range.1, self.points);
        let grid = model.time_cut(&s, x, &ts)?;
        let table = field_table(&grid)?;
        let extra = json!({
            "parameters": { "model": model.label(), "x": x, "t_min": t_range.0, "t_max": t_range.1 },
            "scenario": scenario_json(&s),
            "markers": time_markers(&s, x),
        });
        self.record(
            figure,
            stem,
            &table,
            format!("figure {figure}: {what}"),
            extra,
        )
    }

    fn figure(&mut self, n: u8) -> CliResult<()> {
        match n {
            1 => self.fig1(),
            2 => self.fig2(),
            3 => self.fig3(),
            4 => self.fig4(),
            5 => self.fig5(),
            6 => self.fig6(),
            _ => self.fig7(),
        }
    }

    fn fig1(&mut self) -> CliResult<()> {
        for t in [15.0, 30.0] {
            let stem = format!("fig1a_space_t{}", tag(t));
            self.space(
                1,
                &stem,
                Model::Exact,
                true,
                t,
                40.0,
                &format!("panel a, space cut at t = {t} fs"),
            )?;
        }
        for x in [5.0, 30.0] {
            let stem = format!("fig1b_time_x{}", tag(x));
            self.time(
                1,
                &stem,
                Model::Exact,
                true,
                x,
                (0.05, 150.0),
                &format!("panel b, time cut at x = {x} nm"),
            )?;
        }
        Ok(())
    }

    fn fig2(&mut self) -> CliResult<()> {
        for (panel, x) in [("a", 1.2), ("a", 1.5), ("b", 6.0), ("b", 10.0)] {
            let stem = format!("fig2{panel}_time_x{}", tag(x));
            self.time(
                2,
                &stem,
                Model::Exact,
                false,
                x,
                (0.02, 60.0),
                &format!("panel {panel}, time cut at x = {x} nm"),
            )?;
        }
        Ok(())
    }

    fn fig3(&mut self) -> CliResult<()> {
        for (panel, t) in [("a", 1.0), ("b", 3.0), ("c", 4.0), ("d", 15.0)] {
            let stem = format!("fig3{panel}_space_t{}", tag(t));
            self.space(
                3,
                &stem,
                Model::Exact,
                false,
                t,
                10.0,
                &format!("panel {panel}, space cut at t = {t} fs"),
            )?;
        }
        let x0 = onset_bound(&self.below)?;
        let note = format!("caption lists X0 = 2.134; these parameters give X0 = 2/q0 = {x0} nm");
        for e in self.entries.iter_mut().filter(|e| e["figure"] == 3) {
            e["consistency_note"] = json!(note);
        }
        Ok(())
    }

    fn fig4(&mut self) -> CliResult<()> {
        let x0 = onset_bound(&self.below)?;
        for t in [1.0, 2.0, 3.0, 15.0] {
            let stem = format!("fig4_space_t{}", tag(t));
            let table = self.space(
                4,
                &stem,
                Model::Exact,
                false,
                t,
                x0,
                &format!("space cut at t = {t} fs over 0 <= x <= X0"),
            )?;
            if t == 15.0 {
                let deviation = table
                    .rows
                    .iter()
                    .map(|r| (r[4] - r[5]).abs())
                    .fold(0.0f64, f64::max);
                let pass = deviation <= FIG4_TOLERANCE;
                if !pass {
                    self.failures.push(format!(
                        "figure 4: late cut deviates from the stationary density by {deviation}"
                    ));
                }
                let entry = self.entries.last_mut().expect("entry just recorded");
                entry["check"] = json!({
                    "quantity": "max |density - stationary_density|",
                    "value": deviation,
                    "tolerance": FIG4_TOLERANCE,
                    "pass": pass,
                });
            }
        }
        Ok(())
    }

    fn fig5(&mut self) -> CliResult<()> {
        let t0 = 30.0;
        let v = self.below.group_velocity();
        let times = [t0, 100.0, 150.0, 300.0];
        for t in times {
            let stem = format!("fig5a_space_t{}", tag(t));
            self.space(
                5,
                &stem,
                Model::Exact,
                false,
                t,
                4.0 * v * t,
                &format!("panel a, space cut at t = {t} fs"),
            )?;
        }
        let header = &["x_over_eta", "t", "eta_density"];
        let xs = linspace(0.0, 4.0 * v * t0, self.points);
        for t in &times[1..] {
            let eta = t / t0;
            let mut table = Table::new(header);
            for &x in &xs {
                let d = psi(eta * x, *t, &self.below)?.norm_sqr();
                table.push(vec![x, *t, eta * d]);
            }
            let stem = format!("fig5b_rescaled_t{}", tag(*t));
            let extra = json!({
                "parameters": { "t": t, "t0": t0, "eta": eta, "x_over_eta_max": 4.0 * v * t0 },
                "scenario": scenario_json(&self.below),
            });
            self.record(
                5,
                &stem,
                &table,
                format!("figure 5: panel b, rescaled cut, eta = {eta}"),
                extra,
            )?;
        }
        let mut table = Table::new(header);
        for &x in &xs {
            table.push(vec![x, t0, pulse_density(x, t0, &self.below)?]);
        }
        let extra = json!({
            "parameters": { "t0": t0, "x_over_eta_max": 4.0 * v * t0 },
            "scenario": scenario_json(&self.below),
        });
        self.record(
            5,
            "fig5b_scaling_form",
            &table,
            "figure 5: panel b, closed-form scaled pulse density".to_owned(),
            extra,
        )
    }

    fn fig6(&mut self) -> CliResult<()> {
        for model in [Model::Exact, Model::Decomposition, Model::Pulse] {
            let label = model.label();
            self.time(
                6,
                &format!("fig6a_time_x8_{label}"),
                model,
                false,
                8.0,
                (0.05, 80.0),
                &format!("panel a, {label} time cut at x = 8 nm"),
            )?;
            self.space(
                6,
                &format!("fig6b_space_t30_{label}"),
                model,
                false,
                30.0,
                40.0,
                &format!("panel b, {label} space cut at t = 30 fs"),
            )?;
        }
        Ok(())
    }

    fn fig7(&mut self) -> CliResult<()> {
        let t_m = 30.0;
        let t_prime = 3f64.sqrt() * t_m;
        let v = self.below.group_velocity();
        let x_m = v * t_m;
        let x_f = 3f64.sqrt() * x_m;
        let h = pulse_heights(x_f, &self.below)?;
        let x_max = 4.0 * v * t_prime;
        let note = format!(
            "caption lists x_m = 48.639 nm at 30 fs, i.e. v = 1.6213 nm/fs; these parameters give v = {v} nm/fs; the ratio x_f/x_m = sqrt(3) agrees"
        );
        for (stem, t, what) in [
            ("fig7_pulse_t30", t_m, "pulse at t_m = 30 fs"),
            ("fig7_pulse_t_prime", t_prime, "pulse at t' = sqrt(3) t_m"),
        ] {
            self.space(7, stem, Model::Pulse, false, t, x_max, what)?;
            let entry = self.entries.last_mut().expect("entry just recorded");
            entry["consistency_note"] = json!(note);
            entry["heights"] = json!({
                "x_m": h.x_m,
                "x_f": x_f,
                "h_hc": h.h_hc,
                "h_fd": h.h_fd,
                "h_fd_at_t_prime": h.h_fd_at_t_prime,
                "ratio": h.ratio,
                "x_f_over_x_m": x_f / h.x_m,
            });
        }
        Ok(())
    }
}

pub fn run(cfg: &RunConfig, figure: Option<&str>) -> CliResult<()> {
    if cfg.str_or("units", "ev-nm-fs") != "ev-nm-fs" {
        return Err(CliError::Usage("reproduce always uses ev-nm-fs".to_owned()));
    }
    for key in ["V0", "E0", "mass"] {
        if cfg.raw(key).is_some() {
            return Err(CliError::Usage(format!(
                "reproduce uses fixed figure parameters; `{key}` cannot be set"
            )));
        }
    }
    let figures = parse_figures(figure.unwrap_or_else(|| cfg.str_or("figure", "all")))?;
    let units = UnitSystem::ev_nm_fs();
    let mut run = Run {
        dir: cfg.out_dir(),
        format: cfg.format()?,
        points: cfg.count_or("points", 2001)?,
        above: SourceScenario::new(units.clone(), V0, E0_ABOVE)?,
        below: SourceScenario::new(units, V0, E0_BELOW)?,
        entries: Vec::new(),
        failures: Vec::new(),
    };
    ensure_dir(&run.dir)?;
    for n in &figures {
        run.figure(*n)?;
    }
    let manifest = json!({
        "command": "reproduce",
        "figures": figures,
        "points": run.points,
        "files": run.entries,
        "checks_failed": run.failures,
    });
    write_manifest(&run.dir, MANIFEST, &manifest)?;
    if !run.failures.is_empty() {
        return Err(CliError::Check(run.failures.join("; ")));
    }
    Ok(())
}
