//! `field`: space or time cuts of the wave function.

use serde_json::{json, Value};

use super::{
    emit, field_table, scenario_json, space_markers, tag, time_markers, write_manifest, Model,
};
use crate::config::{linspace, ordered_range, RunConfig};
use crate::error::{CliError, CliResult};
use crate::format::ensure_dir;

pub const MANIFEST: &str = "field_manifest.json";

pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let s = cfg.scenario()?;
    let format = cfg.format()?;
    let model = Model::parse(cfg.str_or("model", "exact"))?;
    model.check(&s)?;
    let dir = cfg.out_dir();

    let axis = cfg.str_or("axis", "space");
    let (curves, axis_params) = match axis {
        "space" => {
            let ts = cfg.list_or("t", &[1.0])?;
            if let Some(t) = ts.iter().find(|t| **t <= 0.0) {
                return Err(CliError::Usage(format!(
                    "cut times must be positive, got {t}"
                )));
            }
            let (lo, hi) = (cfg.f64_or("x_min", 0.0)?, cfg.f64_or("x_max", 10.0)?);
            ordered_range("x", lo, hi, false)?;
            let xs = linspace(lo, hi, cfg.count_or("nx", 201)?);
            let mut curves = Vec::new();
            for t in ts {
                let grid = model.space_cut(&s, t, &xs)?;
                curves.push((
                    format!("field_space_t{}", tag(t)),
                    t,
                    grid,
                    space_markers(&s, t)?,
                ));
            }
            let params = json!({ "x_min": lo, "x_max": hi, "nx": xs.len() });
            (curves, params)
        }
        "time" => {
            let xs = cfg.list_or("x", &[1.0])?;
            if let Some(x) = xs.iter().find(|x| **x < 0.0) {
                return Err(CliError::Usage(format!(
                    "cut positions must be non-negative, got {x}"
                )));
            }
            let (lo, hi) = (cfg.f64_or("t_min", 0.01)?, cfg.f64_or("t_max", 10.0)?);
            ordered_range("t", lo, hi, true)?;
            let ts = linspace(lo, hi, cfg.count_or("nt", 201)?);
            let mut curves = Vec::new();
            for x in xs {
                let grid = model.time_cut(&s, x, &ts)?;
                curves.push((
                    format!("field_time_x{}", tag(x)),
                    x,
                    grid,
                    time_markers(&s, x),
                ));
            }
            let params = json!({ "t_min": lo, "t_max": hi, "nt": ts.len() });
            (curves, params)
        }
        other => {
            return Err(CliError::Usage(format!(
                "axis must be space or time, got `{other}`"
            )));
        }
    };

    ensure_dir(&dir)?;
    let mut files: Vec<Value> = Vec::new();
    for (stem, fixed, grid, markers) in curves {
        let name = emit(&dir, &stem, &field_table(&grid)?, format)?;
        files.push(json!({
            "file": name,
            "fixed": fixed,
            "markers": markers,
        }));
    }
    let manifest = json!({
        "command": "field",
        "axis": axis,
        "model": model.label(),
        "scenario": scenario_json(&s),
        "grid": axis_params,
        "files": files,
    });
    write_manifest(&dir, MANIFEST, &manifest)?;
    Ok(())
}
