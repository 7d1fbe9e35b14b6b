//! Independent references for the analytic pipeline.

pub mod cn;
pub mod talbot;

use serde::{Deserialize, Serialize};

pub use cn::{cn_evolve, cn_evolve_with, BoundaryTreatment, CnOptions, CnState, GridSpec};
pub use talbot::{talbot_invert, talbot_invert_with};

use crate::error::{require_positive, Result};
use crate::units::SourceScenario;
use crate::wavefield;

/// One grid point of a three-way comparison at the final CN time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub x: f64,
    pub t: f64,
    pub analytic_density: f64,
    pub cn_density: f64,
    pub talbot_density: f64,
    /// `|psi_cn - psi|` over the RMS of the analytic field on the window.
    pub rel_err_cn: f64,
    /// `|psi_talbot - psi| / |psi|`.
    pub rel_err_talbot: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<OracleRow>,
    /// Relative L2 error of CN over the window.
    pub cn_l2: f64,
    pub talbot_max: f64,
}

/// Compares CN, Talbot and the exact solution at the final time on
/// `0 <= x <= x_max`, probing Talbot on every `talbot_stride`-th point.
pub fn compare(
    s: &SourceScenario,
    grid: &GridSpec,
    opts: &CnOptions,
    x_max: f64,
    talbot_stride: usize,
) -> Result<Comparison> {
    require_positive("x_max", x_max)?;
    let state = cn_evolve_with(s, grid, opts)?
        .pop()
        .expect("cn_evolve returns the final state");
    let t = state.t;
    let amplitude = opts.source_amplitude;
    let stride = talbot_stride.max(1);
    let mut points = Vec::new();
    for (i, cn_value) in state.psi.iter().enumerate() {
        let x = grid.x(i);
        if x > x_max {
            break;
        }
        let exact = amplitude * wavefield::psi(x, t, s)?;
        let talbot = if i % stride == 0 {
            Some(amplitude * talbot_invert(x, t, s)?)
        } else {
            None
        };
        points.push((x, exact, *cn_value, talbot));
    }
    let sum_exact: f64 = points.iter().map(|p| p.1.norm_sqr()).sum();
    let sum_diff: f64 = points.iter().map(|p| (p.2 - p.1).norm_sqr()).sum();
    let rms = (sum_exact / points.len() as f64).sqrt();
    let ratio = |num: f64, den: f64| {
        if den > 0.0 {
            num / den
        } else if num > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    };
    let cn_l2 = ratio(sum_diff.sqrt(), sum_exact.sqrt());
    let mut talbot_max = 0.0f64;
    let rows = points
        .into_iter()
        .map(|(x, exact, cn, talbot)| {
            let (talbot_density, rel_err_talbot) = match talbot {
                Some(v) => (v.norm_sqr(), ratio((v - exact).norm(), exact.norm())),
                None => (f64::NAN, f64::NAN),
            };
            if !rel_err_talbot.is_nan() {
                talbot_max = talbot_max.max(rel_err_talbot);
            }
            OracleRow {
                x,
                t,
                analytic_density: exact.norm_sqr(),
                cn_density: cn.norm_sqr(),
                talbot_density,
                rel_err_cn: ratio((cn - exact).norm(), rms),
                rel_err_talbot,
            }
        })
        .collect();
    Ok(Comparison {
        rows,
        cn_l2,
        talbot_max,
    })
}
