//! `oracle`: Crank-Nicolson and Talbot against the exact solution.
//!
//! Grid defaults are set in the scenario's own scales, length `1/k` and time
//! `m / (hbar k^2)` with `k` the scenario wavenumber, so one default fits
//! every unit system.

use serde_json::json;
use stepwave::oracle::{compare, BoundaryTreatment, CnOptions, GridSpec};

use super::{emit, scenario_json, write_manifest};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::format::{ensure_dir, Table};

pub const TABLE_STEM: &str = "oracle";
pub const SUMMARY: &str = "oracle_summary.json";
pub const HEADER: &[&str] = &[
    "x",
    "t",
    "analytic_density",
    "cn_density",
    "talbot_density",
    "rel_err_cn",
    "rel_err_talbot",
];

const DEFAULT_LENGTH: f64 = 100.0;
const DEFAULT_NX: usize = 4096;
const DEFAULT_DT: f64 = 5e-4;
const DEFAULT_STEPS: usize = 8000;
const DEFAULT_WINDOW: f64 = 5.0;

fn boundary(value: &str) -> CliResult<BoundaryTreatment> {
    match value {
        "midpoint" => Ok(BoundaryTreatment::Midpoint),
        "endpoints" => Ok(BoundaryTreatment::Endpoints),
        other => Err(CliError::Usage(format!(
            "boundary must be midpoint or endpoints, got `{other}`"
        ))),
    }
}

pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let s = cfg.scenario()?;
    let format = cfg.format()?;
    let k = s.wavenumber();
    let length_unit = 1.0 / k;
    let time_unit = 1.0 / (s.units.hbar_over_mass() * k * k);
    let grid = GridSpec {
        length: cfg.positive_or("L", DEFAULT_LENGTH * length_unit)?,
        nx: cfg.usize_or("nx", DEFAULT_NX)?,
        dt: cfg.positive_or("dt", DEFAULT_DT * time_unit)?,
        n_steps: cfg.usize_or("n_steps", DEFAULT_STEPS)?,
    };
    let x_window = cfg.positive_or("x_window", DEFAULT_WINDOW * length_unit)?;
    let opts = CnOptions {
        source_amplitude: cfg.f64_or("source_amplitude", 1.0)?,
        boundary: boundary(cfg.str_or("boundary", "midpoint"))?,
        ..CnOptions::default()
    };
    let tol_cn = cfg.positive_or("tolerance_cn", 1e-3)?;
    let tol_talbot = cfg.positive_or("tolerance_talbot", 1e-6)?;
    let stride = cfg.usize_or("talbot_stride", 1)?;
    if stride == 0 {
        return Err(CliError::Usage(
            "talbot_stride must be at least 1".to_owned(),
        ));
    }
    let dir = cfg.out_dir();

    let cmp = compare(&s, &grid, &opts, x_window, stride)?;

    let mut table = Table::new(HEADER);
    let mut violations = 0usize;
    for r in &cmp.rows {
        let bad_cn = r.rel_err_cn > tol_cn;
        let bad_talbot = r.rel_err_talbot > tol_talbot;
        if bad_cn || bad_talbot {
            violations += 1;
            eprintln!(
                "violation: x = {}, t = {}, rel_err_cn = {:e}{}, rel_err_talbot = {:e}{}",
                r.x,
                r.t,
                r.rel_err_cn,
                if bad_cn { " (over)" } else { "" },
                r.rel_err_talbot,
                if bad_talbot { " (over)" } else { "" },
            );
        }
        table.push(vec![
            r.x,
            r.t,
            r.analytic_density,
            r.cn_density,
            r.talbot_density,
            r.rel_err_cn,
            r.rel_err_talbot,
        ]);
    }
    let l2_ok = cmp.cn_l2 <= tol_cn;
    let pass = violations == 0 && l2_ok;

    ensure_dir(&dir)?;
    let file = emit(&dir, TABLE_STEM, &table, format)?;
    let summary = json!({
        "command": "oracle",
        "scenario": scenario_json(&s),
        "grid": grid,
        "boundary": opts.boundary,
        "source_amplitude": opts.source_amplitude,
        "x_window": x_window,
        "talbot_stride": stride,
        "file": file,
        "rows": cmp.rows.len(),
        "cn_l2": cmp.cn_l2,
        "talbot_max": cmp.talbot_max,
        "tolerance_cn": tol_cn,
        "tolerance_talbot": tol_talbot,
        "violating_rows": violations,
        "pass": pass,
    });
    write_manifest(&dir, SUMMARY, &summary)?;
    if !pass {
        return Err(CliError::Check(format!(
            "{violations} rows over tolerance; CN relative L2 = {:e} (tolerance {tol_cn:e})",
            cmp.cn_l2
        )));
    }
    Ok(())
}
