//! Numerical inversion of the Laplace-domain solution on a fixed Talbot
//! contour.
//!
//! With `beta = 2m/hbar` and `p^2 = beta (i s - V)`, the transform of the
//! driven solution is `exp(i p x) / (s + i omega0)`, `Im p >= 0`. The
//! contour is laid out in `s' = s + iV`, where the branch point of `p` sits
//! at the origin and its cut on the negative real axis.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::config;
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::units::SourceScenario;

const SIGMA: f64 = -0.6122;
const MU: f64 = 0.5017;
const ALPHA: f64 = 0.6407;
const NU: f64 = 0.2645;

fn contour(theta: f64) -> (Complex64, Complex64) {
    let (sin, cos) = (ALPHA * theta).sin_cos();
    let cot = cos / sin;
    let point = Complex64::new(SIGMA + MU * theta * cot, NU * theta);
    let slope = Complex64::new(MU * cot - MU * ALPHA * theta / (sin * sin), NU);
    (point, slope)
}

/// Angle at which the unit-scale contour crosses the imaginary axis.
fn crossing_angle() -> f64 {
    let (mut lo, mut hi) = (1e-6, PI - 1e-9);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if contour(mid).0.re > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest `|V - omega0| t / N` for which the source pole at
/// `s' = i (V - omega0)` lies inside the contour.
pub fn pole_capacity() -> f64 {
    NU * crossing_angle()
}

pub fn talbot_invert(x: f64, t: f64, s: &SourceScenario) -> Result<Complex64> {
    talbot_invert_with(x, t, s, config::TALBOT_NODES)
}

pub fn talbot_invert_with(x: f64, t: f64, s: &SourceScenario, nodes: usize) -> Result<Complex64> {
    require_non_negative("x", x)?;
    require_positive("t", t)?;
    if nodes < 4 {
        return Err(Error::InvalidParameter {
            name: "nodes",
            reason: format!("need at least 4 nodes, got {nodes}"),
        });
    }
    let v = s.barrier_frequency();
    let omega0 = s.omega0();
    let n = nodes as f64;
    let pole = (v - omega0).abs() * t;
    let capacity = config::TALBOT_POLE_FRACTION * pole_capacity() * n;
    if pole >= capacity {
        return Err(Error::ContourCrossing(format!(
            "|V - omega0| t = {pole} needs more than {nodes} nodes (limit {capacity})"
        )));
    }
    let beta = 2.0 * s.units.mass / s.units.hbar;
    let scale = n / t;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let theta = -PI + (k as f64 + 0.5) * 2.0 * PI / n;
        let (point, slope) = contour(theta);
        let s_shift = scale * point;
        let ds = scale * slope;
        let lap = s_shift - Complex64::new(0.0, v);
        let p = Complex64::from_polar(
            (beta * s_shift.norm()).sqrt(),
            0.5 * s_shift.arg() + FRAC_PI_4,
        );
        let transform = (Complex64::i() * p * x).exp() / (lap + Complex64::new(0.0, omega0));
        sum += (lap * t).exp() * transform * ds;
    }
    Ok(sum / (Complex64::i() * n))
}
