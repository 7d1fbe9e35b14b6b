//! Moshinsky functions `M(x, q, t) = 1/2 exp(i m x^2 / 2 hbar t) w(i y_q)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::faddeeva;
use crate::units::{Regime, SourceScenario};

/// Half-width of the band around `|phase| = pi/2` that is reported as a
/// branch boundary instead of being silently classified.
pub const BRANCH_BOUNDARY_TOLERANCE: f64 = 1e-12;

/// The four wave numbers entering the exact solutions: `+-k0` above the
/// barrier, `+-i q0` below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveMode {
    PlusK,
    MinusK,
    PlusIq,
    MinusIq,
}

impl WaveMode {
    pub fn regime(self) -> Regime {
        match self {
            WaveMode::PlusK | WaveMode::MinusK => Regime::Above,
            WaveMode::PlusIq | WaveMode::MinusIq => Regime::Below,
        }
    }

    /// The complex wave number q for this mode in scenario `s`.
    pub fn q(self, s: &SourceScenario) -> Result<Complex64> {
        s.require_regime(self.regime())?;
        let k = s.wavenumber();
        Ok(match self {
            WaveMode::PlusK => Complex64::new(k, 0.0),
            WaveMode::MinusK => Complex64::new(-k, 0.0),
            WaveMode::PlusIq => Complex64::new(0.0, k),
            WaveMode::MinusIq => Complex64::new(0.0, -k),
        })
    }

    /// The two modes summed in the exact solution of the regime.
    pub fn pair(regime: Regime) -> [WaveMode; 2] {
        match regime {
            Regime::Above => [WaveMode::PlusK, WaveMode::MinusK],
            Regime::Below => [WaveMode::PlusIq, WaveMode::MinusIq],
        }
    }
}

/// Which large-|y| expansion of M applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `|phase| < pi/2`: inverse-power series only.
    Principal,
    /// `|phase| > pi/2`: the series plus `2 exp(y^2)`.
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MArgument {
    pub y: Complex64,
    pub magnitude: f64,
    /// arg(y) in (-pi, pi].
    pub phase: f64,
    pub branch: Branch,
    /// Set when the phase lies within [`BRANCH_BOUNDARY_TOLERANCE`] of
    /// `+-pi/2`; the branch is then `Principal` by convention.
    pub on_boundary: bool,
}

impl MArgument {
    pub fn from_y(y: Complex64) -> Self {
        let magnitude = y.norm();
        let mut phase = y.im.atan2(y.re);
        if phase <= -PI {
            phase += 2.0 * PI;
        }
        let distance = (phase.abs() - FRAC_PI_2).abs();
        let on_boundary = magnitude > 0.0 && distance <= BRANCH_BOUNDARY_TOLERANCE;
        let branch = if on_boundary || phase.abs() < FRAC_PI_2 {
            Branch::Principal
        } else {
            Branch::Exponential
        };
        Self {
            y,
            magnitude,
            phase,
            branch,
            on_boundary,
        }
    }
}

fn check_point(x: f64, t: f64) -> Result<()> {
    require_non_negative("x", x)?;
    require_positive("t", t)?;
    Ok(())
}

/// `exp(i m x^2 / 2 hbar t)`.
pub(crate) fn free_phase(x: f64, t: f64, s: &SourceScenario) -> Complex64 {
    let arg = x * x / (2.0 * s.units.hbar_over_mass() * t);
    Complex64::from_polar(1.0, arg)
}

/// `y_q = exp(-i pi/4) sqrt(m / 2 hbar t) (x - hbar q t / m)`.
pub fn argument_y(x: f64, mode: WaveMode, t: f64, s: &SourceScenario) -> Result<MArgument> {
    check_point(x, t)?;
    let q = mode.q(s)?;
    let hm = s.units.hbar_over_mass();
    let scale = (1.0 / (2.0 * hm * t)).sqrt();
    let bracket = Complex64::new(x, 0.0) - q * (hm * t);
    let y = Complex64::from_polar(scale, -FRAC_PI_4) * bracket;
    Ok(MArgument::from_y(y))
}

/// M through the Faddeeva kernel; the production path everywhere.
pub fn m_direct(x: f64, mode: WaveMode, t: f64, s: &SourceScenario) -> Result<Complex64> {
    let arg = argument_y(x, mode, t, s)?;
    let w = faddeeva::faddeeva_w(Complex64::i() * arg.y)?;
    Ok(0.5 * free_phase(x, t, s) * w)
}

/// Large-|y| expansion of M with one or two inverse-power terms, plus
/// `2 exp(y^2)` on the exponential branch.
pub fn m_series(
    arg: &MArgument,
    n_terms: usize,
    x: f64,
    t: f64,
    s: &SourceScenario,
) -> Result<Complex64> {
    check_point(x, t)?;
    if !(1..=2).contains(&n_terms) {
        return Err(Error::InvalidParameter {
            name: "n_terms",
            reason: format!("series is available with 1 or 2 terms, got {n_terms}"),
        });
    }
    if arg.magnitude < 1.0 {
        return Err(Error::OutOfDomain(format!(
            "asymptotic series needs |y| >= 1, got {}",
            arg.magnitude
        )));
    }
    let y = arg.y;
    let sqrt_pi = PI.sqrt();
    let mut bracket = 1.0 / (sqrt_pi * y);
    if n_terms == 2 {
        bracket -= 1.0 / (2.0 * sqrt_pi * y * y * y);
    }
    if arg.branch == Branch::Exponential {
        bracket += 2.0 * (y * y).exp();
    }
    Ok(0.5 * free_phase(x, t, s) * bracket)
}

/// One-term approximants of the two below-barrier M functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneTermPieces {
    /// `M(y_{-iq0}) ~ 1/2 e^{...} / (sqrt(pi) y)`.
    pub minus_iq: Complex64,
    /// `M(y_{iq0}) ~ 1/2 e^{...} (2 exp(y^2) + 1 / (sqrt(pi) y))`.
    pub plus_iq: Complex64,
}

pub fn m_one_term_pulse_pieces(x: f64, t: f64, s: &SourceScenario) -> Result<OneTermPieces> {
    s.require_regime(Regime::Below)?;
    require_positive("x", x)?;
    require_positive("t", t)?;
    let sqrt_pi = PI.sqrt();
    let prefactor = 0.5 * free_phase(x, t, s);
    let y_minus = argument_y(x, WaveMode::MinusIq, t, s)?.y;
    let y_plus = argument_y(x, WaveMode::PlusIq, t, s)?.y;
    Ok(OneTermPieces {
        minus_iq: prefactor / (sqrt_pi * y_minus),
        plus_iq: prefactor * (2.0 * (y_plus * y_plus).exp() + 1.0 / (sqrt_pi * y_plus)),
    })
}
