//! `forerunner`: analytic and numeric forerunner reports plus scaling checks.

use serde_json::{json, Map, Value};
use stepwave::forerunner::{
    forerunner_report, scaling_check, ForerunnerReport, Method, ScalingField,
};
use stepwave::Regime;

use super::{scenario_json, write_manifest};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::format::ensure_dir;

pub const REPORT: &str = "forerunner.json";

pub const DEFAULT_ETAS: &[f64] = &[1.0, 10.0 / 3.0, 5.0, 10.0];

fn discrepancies(a: &ForerunnerReport, n: &ForerunnerReport) -> Value {
    let pairs = [
        ("x0", a.x0, n.x0),
        ("t_m", a.t_m, n.t_m),
        ("x_m", a.x_m, n.x_m),
        ("h_hc", a.h_hc, n.h_hc),
        ("h_fd", a.h_fd, n.h_fd),
        ("h_fd_at_t_prime", a.h_fd_at_t_prime, n.h_fd_at_t_prime),
        ("height_ratio", a.height_ratio, n.height_ratio),
        ("x_f_over_x_m", a.x_f_over_x_m, n.x_f_over_x_m),
    ];
    let mut out = Map::new();
    for (key, analytic, numeric) in pairs {
        out.insert(
            key.to_owned(),
            json!((numeric - analytic).abs() / analytic.abs()),
        );
    }
    Value::Object(out)
}

pub fn run(cfg: &RunConfig) -> CliResult<()> {
    if cfg.raw("format") == Some("csv") {
        return Err(CliError::Usage("forerunner writes JSON only".to_owned()));
    }
    let s = cfg.scenario()?;
    s.require_regime(Regime::Below)?;
    let x_f = cfg.positive_or("x_f", 8.0)?;
    let t_f = cfg.positive_or("t_f", 30.0)?;
    let t0 = cfg.positive_or("t0", 30.0)?;
    let xr_times = cfg.list_or("xr_times", &[t_f])?;
    let etas = cfg.list_or("etas", DEFAULT_ETAS)?;
    let numeric = cfg.bool_or("numeric", true)?;
    let dir = cfg.out_dir();

    let analytic = forerunner_report(&s, x_f, t_f, &xr_times, Method::AnalyticEq12)?;
    let numeric_result =
        numeric.then(|| forerunner_report(&s, x_f, t_f, &xr_times, Method::NumericEq3));

    let mut scaling = Vec::new();
    for (field, label) in [(ScalingField::Eq12, "eq12"), (ScalingField::Eq3, "eq3")] {
        for &eta in &etas {
            let c = scaling_check(&s, eta, t0, field)?;
            scaling.push(json!({
                "field": label,
                "eta": c.eta,
                "t0": t0,
                "max_residual": c.max_residual,
                "support": [c.support.0, c.support.1],
            }));
        }
    }

    let (numeric_json, numeric_error, discrepancy) = match &numeric_result {
        None => (Value::Null, Value::Null, Value::Null),
        Some(Ok(n)) => (json!(n), Value::Null, discrepancies(&analytic, n)),
        Some(Err(e)) => (Value::Null, json!(e.to_string()), Value::Null),
    };
    let report = json!({
        "command": "forerunner",
        "scenario": scenario_json(&s),
        "x_f": x_f,
        "t_f": t_f,
        "height_ratio": analytic.height_ratio,
        "x_f_over_x_m": analytic.x_f_over_x_m,
        "analytic": analytic,
        "numeric": numeric_json,
        "numeric_error": numeric_error,
        "relative_discrepancy": discrepancy,
        "scaling": scaling,
    });
    ensure_dir(&dir)?;
    write_manifest(&dir, REPORT, &report)?;
    if let Some(Err(e)) = numeric_result {
        return Err(CliError::Check(format!(
            "numeric forerunner analysis failed: {e}"
        )));
    }
    Ok(())
}
