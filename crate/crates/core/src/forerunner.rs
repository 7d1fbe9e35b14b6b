//! Forerunner analysis: onset bound, crossover, extremal times and
//! positions, heights, scaling, and the numerically detected pulse birth.
//!
//! Every quantity has an `AnalyticEq12` form computed from the closed-form
//! pulse density and, where meaningful, a `NumericEq3` form extracted from
//! the exact below-barrier density.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{require_positive, Error, Result};
use crate::search::{bisect_root, bracketed_max};
use crate::units::{Regime, SourceScenario};
use crate::wavefield::{psi_below, pulse_density};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    AnalyticEq12,
    NumericEq3,
}

/// Which density a scaling check is run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingField {
    Eq12,
    Eq3,
}

fn exact_density(x: f64, t: f64, s: &SourceScenario) -> Result<f64> {
    Ok(psi_below(x, t, s)?.norm_sqr())
}

/// `X0 = 2 / q0`.
pub fn onset_bound(s: &SourceScenario) -> Result<f64> {
    Ok(2.0 * s.penetration_length()?)
}

/// Position where the stationary and pulse densities are equal.
///
/// The ratio falls monotonically from `+inf` at the source through 1 before
/// the pulse peak `v t`, so the root is bracketed on `(0, v t]`.
pub fn crossover_position(t: f64, s: &SourceScenario) -> Result<f64> {
    s.require_regime(Regime::Below)?;
    require_positive("t", t)?;
    let v = s.group_velocity();
    let x0 = onset_bound(s)?;
    if t <= x0 / v {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("crossover needs t > X0/v = {}, got {t}", x0 / v),
        });
    }
    let q0 = s.wavenumber();
    let log_ratio = |x: f64| -> Result<f64> { Ok(-2.0 * q0 * x - pulse_density(x, t, s)?.ln()) };
    let peak = v * t;
    if log_ratio(peak)? >= 0.0 {
        return Err(Error::NoRoot(format!(
            "stationary density exceeds the pulse at its peak x = {peak}"
        )));
    }
    bisect_root(log_ratio, 1e-6 * peak, peak, config::CROSSOVER_REL_TOL)
}

/// Time at which the density at `x_f` peaks.
pub fn time_of_density_max(x_f: f64, s: &SourceScenario, method: Method) -> Result<f64> {
    let tau = s.traversal_time(x_f)?;
    match method {
        Method::AnalyticEq12 => Ok(tau / 3f64.sqrt()),
        Method::NumericEq3 => {
            let (lo, hi) = config::PULSE_WINDOW_TAU;
            let (t, _) = bracketed_max(
                |t| exact_density(x_f, t, s),
                lo * tau,
                hi * tau,
                config::PRESCAN_POINTS_PER_DECADE,
                config::EXTREMUM_REL_TOL,
            )?;
            Ok(t)
        }
    }
}

/// Position at which the density peaks at time `t_f`.
pub fn position_of_density_max(t_f: f64, s: &SourceScenario, method: Method) -> Result<f64> {
    s.require_regime(Regime::Below)?;
    require_positive("t_f", t_f)?;
    let v = s.group_velocity();
    match method {
        Method::AnalyticEq12 => Ok(v * t_f),
        Method::NumericEq3 => Ok(numeric_space_max(t_f, s)?.0),
    }
}

/// Space cuts are searched on `[max(X0, X_R(t_f)), reach v t_f]`; left of
/// the crossover the stationary tail outweighs the pulse.
fn numeric_space_max(t_f: f64, s: &SourceScenario) -> Result<(f64, f64)> {
    let mut x0 = onset_bound(s)?;
    if t_f > x0 / s.group_velocity() {
        x0 = x0.max(crossover_position(t_f, s)?);
    }
    let hi = config::SPACE_CUT_REACH * s.group_velocity() * t_f;
    if hi <= x0 {
        return Err(Error::NoInteriorMaximum(format!(
            "search window [X0, {hi}] is empty at t = {t_f}"
        )));
    }
    bracketed_max(
        |x| exact_density(x, t_f, s),
        x0,
        hi,
        config::PRESCAN_POINTS_PER_DECADE,
        config::EXTREMUM_REL_TOL,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseHeights {
    pub t_m: f64,
    pub x_m: f64,
    /// Density at `x_f` at its own peak time `t_m`.
    pub h_hc: f64,
    /// Spatial peak density at time `t_m`.
    pub h_fd: f64,
    /// Spatial peak density at `t' = sqrt(3) t_m`, when the peak reaches `x_f`.
    pub h_fd_at_t_prime: f64,
    pub ratio: f64,
}

/// Closed-form heights for a detector at `x_f`.
pub fn pulse_heights(x_f: f64, s: &SourceScenario) -> Result<PulseHeights> {
    let t_m = time_of_density_max(x_f, s, Method::AnalyticEq12)?;
    let x_m = s.group_velocity() * t_m;
    let h_hc = pulse_density(x_f, t_m, s)?;
    let h_fd = pulse_density(x_m, t_m, s)?;
    let h_fd_at_t_prime = pulse_density(x_f, 3f64.sqrt() * t_m, s)?;
    Ok(PulseHeights {
        t_m,
        x_m,
        h_hc,
        h_fd,
        h_fd_at_t_prime,
        ratio: h_hc / h_fd_at_t_prime,
    })
}

/// The same heights read off the exact density: `t_m` is the time-cut
/// argmax at `x_f`, and the spatial peaks are space-cut maxima.
pub fn pulse_heights_numeric(x_f: f64, s: &SourceScenario) -> Result<PulseHeights> {
    let t_m = time_of_density_max(x_f, s, Method::NumericEq3)?;
    let h_hc = exact_density(x_f, t_m, s)?;
    let (x_m, h_fd) = numeric_space_max(t_m, s)?;
    let (_, h_fd_at_t_prime) = numeric_space_max(3f64.sqrt() * t_m, s)?;
    Ok(PulseHeights {
        t_m,
        x_m,
        h_hc,
        h_fd,
        h_fd_at_t_prime,
        ratio: h_hc / h_fd_at_t_prime,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingCheck {
    pub eta: f64,
    /// `max |eta d(eta x, eta t0) - d(x, t0)|` over the support, divided by
    /// the peak of `d(., t0)` there.
    pub max_residual: f64,
    pub support: (f64, f64),
}

/// Samples on the scaling support `[X0, 4 v t0]`.
pub const SCALING_SAMPLES: usize = 2001;

pub fn scaling_check(
    s: &SourceScenario,
    eta: f64,
    t0: f64,
    field: ScalingField,
) -> Result<ScalingCheck> {
    s.require_regime(Regime::Below)?;
    require_positive("eta", eta)?;
    require_positive("t0", t0)?;
    let density = |x: f64, t: f64| match field {
        ScalingField::Eq12 => pulse_density(x, t, s),
        ScalingField::Eq3 => exact_density(x, t, s),
    };
    let lo = onset_bound(s)?;
    let hi = 4.0 * s.group_velocity() * t0;
    if hi <= lo {
        return Err(Error::InvalidParameter {
            name: "t0",
            reason: format!("scaling support [{lo}, {hi}] is empty"),
        });
    }
    let mut peak = 0.0f64;
    let mut residual = 0.0f64;
    for i in 0..SCALING_SAMPLES {
        let x = lo + (hi - lo) * i as f64 / (SCALING_SAMPLES - 1) as f64;
        let base = density(x, t0)?;
        let scaled = if eta == 1.0 {
            base
        } else {
            eta * density(eta * x, eta * t0)?
        };
        peak = peak.max(base);
        residual = residual.max((scaled - base).abs());
    }
    Ok(ScalingCheck {
        eta,
        max_residual: residual / peak,
        support: (lo, hi),
    })
}

/// First appearance of an interior local maximum in a space cut of the
/// exact density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseBirth {
    pub t: f64,
    pub x: f64,
    /// `x q0`, i.e. the birth position in penetration lengths.
    pub x_over_xp: f64,
}

/// Birth-detector resolution, in penetration lengths and `x_p / v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BirthScan {
    pub x_max: f64,
    pub nx: usize,
    pub t_step: f64,
    pub t_max: f64,
    pub bisections: usize,
}

impl Default for BirthScan {
    fn default() -> Self {
        Self {
            x_max: 30.0,
            nx: 6001,
            t_step: 0.05,
            t_max: 20.0,
            bisections: 30,
        }
    }
}

fn first_interior_max(t: f64, xs: &[f64], s: &SourceScenario) -> Result<Option<f64>> {
    let d = xs
        .iter()
        .map(|&x| exact_density(x, t, s))
        .collect::<Result<Vec<_>>>()?;
    Ok((1..d.len() - 1)
        .find(|&i| d[i] > d[i - 1] && d[i] >= d[i + 1])
        .map(|i| xs[i]))
}

pub fn pulse_birth(s: &SourceScenario, scan: &BirthScan) -> Result<PulseBirth> {
    s.require_regime(Regime::Below)?;
    if scan.nx < 3 {
        return Err(Error::InvalidParameter {
            name: "nx",
            reason: "need at least 3 samples".to_owned(),
        });
    }
    let xp = s.penetration_length()?;
    let t_unit = xp / s.group_velocity();
    let xs: Vec<f64> = (0..scan.nx)
        .map(|i| xp * (1e-3 + (scan.x_max - 1e-3) * i as f64 / (scan.nx - 1) as f64))
        .collect();
    let mut lo = 0.0;
    let mut hi = None;
    let mut k = 1;
    while k as f64 * scan.t_step <= scan.t_max {
        let t = k as f64 * scan.t_step * t_unit;
        if first_interior_max(t, &xs, s)?.is_some() {
            hi = Some(t);
            break;
        }
        lo = t;
        k += 1;
    }
    let mut hi = hi.ok_or_else(|| {
        Error::NoInteriorMaximum(format!(
            "no space cut up to t = {} develops an interior maximum",
            scan.t_max * t_unit
        ))
    })?;
    for _ in 0..scan.bisections {
        let mid = 0.5 * (lo + hi);
        if first_interior_max(mid, &xs, s)?.is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let x = first_interior_max(hi, &xs, s)?.expect("hi keeps an interior maximum");
    Ok(PulseBirth {
        t: hi,
        x,
        x_over_xp: x / xp,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossover {
    pub t: f64,
    pub x_r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForerunnerReport {
    pub scenario: SourceScenario,
    pub method: Method,
    /// Analytic: `2/q0`. Numeric: detected pulse-birth position.
    pub x0: f64,
    pub xr_at: Vec<Crossover>,
    pub x_f: f64,
    pub tau: f64,
    pub t_m: f64,
    pub t_f: f64,
    pub x_m: f64,
    pub h_hc: f64,
    pub h_fd: f64,
    pub h_fd_at_t_prime: f64,
    pub height_ratio: f64,
    /// `x_f` over the spatial peak position at `t_m`.
    pub x_f_over_x_m: f64,
}

/// Assembles the report for a detector at `x_f`, a space cut at `t_f` and
/// crossover times `xr_times`.
pub fn forerunner_report(
    s: &SourceScenario,
    x_f: f64,
    t_f: f64,
    xr_times: &[f64],
    method: Method,
) -> Result<ForerunnerReport> {
    s.require_regime(Regime::Below)?;
    let tau = s.traversal_time(x_f)?;
    let xr_at = xr_times
        .iter()
        .map(|&t| {
            Ok(Crossover {
                t,
                x_r: crossover_position(t, s)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (x0, heights) = match method {
        Method::AnalyticEq12 => (onset_bound(s)?, pulse_heights(x_f, s)?),
        Method::NumericEq3 => (
            pulse_birth(s, &BirthScan::default())?.x,
            pulse_heights_numeric(x_f, s)?,
        ),
    };
    Ok(ForerunnerReport {
        scenario: s.clone(),
        method,
        x0,
        xr_at,
        x_f,
        tau,
        t_m: heights.t_m,
        t_f,
        x_m: position_of_density_max(t_f, s, method)?,
        h_hc: heights.h_hc,
        h_fd: heights.h_fd,
        h_fd_at_t_prime: heights.h_fd_at_t_prime,
        height_ratio: heights.ratio,
        x_f_over_x_m: x_f / heights.x_m,
    })
}

/// `1 / (2 pi q0 x)`, the spatial peak density of the pulse at `x`.
pub fn peak_density_at(x: f64, s: &SourceScenario) -> Result<f64> {
    s.require_regime(Regime::Below)?;
    require_positive("x", x)?;
    Ok(1.0 / (2.0 * PI * s.wavenumber() * x))
}
