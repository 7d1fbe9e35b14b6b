//! Exact wave functions, their stationary limits, the transient pulse and
//! the stationary-plus-pulse decomposition.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::moshinsky::{self, m_direct, WaveMode};
use crate::units::{Regime, SourceScenario};

/// Source value `exp(-i omega0 t)`.
pub fn source_value(t: f64, s: &SourceScenario) -> Complex64 {
    Complex64::from_polar(1.0, -s.omega0() * t)
}

fn check_point(x: f64, t: f64) -> Result<()> {
    require_non_negative("x", x)?;
    require_positive("t", t)?;
    Ok(())
}

fn exact(x: f64, t: f64, s: &SourceScenario, regime: Regime) -> Result<Complex64> {
    s.require_regime(regime)?;
    check_point(x, t)?;
    if x == 0.0 {
        return Ok(source_value(t, s));
    }
    let [a, b] = WaveMode::pair(regime);
    let sum = m_direct(x, a, t, s)? + m_direct(x, b, t, s)?;
    Ok(Complex64::from_polar(1.0, -s.barrier_frequency() * t) * sum)
}

/// Above-barrier solution `exp(-iVt) [M(k0) + M(-k0)]`.
pub fn psi_above(x: f64, t: f64, s: &SourceScenario) -> Result<Complex64> {
    exact(x, t, s, Regime::Above)
}

/// Below-barrier solution `exp(-iVt) [M(iq0) + M(-iq0)]`.
pub fn psi_below(x: f64, t: f64, s: &SourceScenario) -> Result<Complex64> {
    exact(x, t, s, Regime::Below)
}

/// Exact solution for whichever regime the scenario is in.
pub fn psi(x: f64, t: f64, s: &SourceScenario) -> Result<Complex64> {
    exact(x, t, s, s.regime)
}

/// Spatial part of the long-time limit: `exp(-q0 x)` below the barrier,
/// `exp(i k0 x)` above it. Multiply by [`source_value`] for the full limit.
pub fn psi_stationary(x: f64, s: &SourceScenario) -> Result<Complex64> {
    require_non_negative("x", x)?;
    let k = s.wavenumber();
    Ok(match s.regime {
        Regime::Below => Complex64::new((-k * x).exp(), 0.0),
        Regime::Above => Complex64::from_polar(1.0, k * x),
    })
}

pub fn stationary_density(x: f64, s: &SourceScenario) -> Result<f64> {
    Ok(psi_stationary(x, s)?.norm_sqr())
}

/// `hbar q0 t / m`, the distance the q0 mode covers in time t.
fn pulse_distance(t: f64, s: &SourceScenario) -> f64 {
    s.units.hbar_over_mass() * s.wavenumber() * t
}

/// Transient-pulse amplitude with a flag set when the individual `1/y`
/// terms were too close to their poles and the combined form was used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseAmplitude {
    pub value: Complex64,
    pub near_pole: bool,
}

/// `psi_tp = exp(i(m x^2/2 hbar t - V t)) / (2 sqrt(pi)) [1/y_{iq0} + 1/y_{-iq0}]`.
pub fn psi_transient_pulse(x: f64, t: f64, s: &SourceScenario) -> Result<Complex64> {
    Ok(psi_transient_pulse_flagged(x, t, s)?.value)
}

pub fn psi_transient_pulse_flagged(x: f64, t: f64, s: &SourceScenario) -> Result<PulseAmplitude> {
    s.require_regime(Regime::Below)?;
    require_positive("x", x)?;
    require_positive("t", t)?;
    let phase =
        moshinsky::free_phase(x, t, s) * Complex64::from_polar(1.0, -s.barrier_frequency() * t);
    let y_plus = moshinsky::argument_y(x, WaveMode::PlusIq, t, s)?.y;
    let y_minus = moshinsky::argument_y(x, WaveMode::MinusIq, t, s)?.y;
    let near_pole = y_plus.norm().min(y_minus.norm()) <= config::PULSE_POLE_GUARD;
    let inverse_sum = if near_pole {
        // 1/y_+ + 1/y_- = 2x / (a (x^2 + u^2)) with y_+- = a (x -+ i u).
        let a = Complex64::from_polar(
            (1.0 / (2.0 * s.units.hbar_over_mass() * t)).sqrt(),
            -FRAC_PI_4,
        );
        let u = pulse_distance(t, s);
        2.0 * x / (a * (x * x + u * u))
    } else {
        1.0 / y_plus + 1.0 / y_minus
    };
    Ok(PulseAmplitude {
        value: phase * inverse_sum / (2.0 * PI.sqrt()),
        near_pole,
    })
}

/// `|psi_tp|^2 = (2/pi) (hbar x^2 t / m) / (x^2 + (hbar q0 t / m)^2)^2`.
pub fn pulse_density(x: f64, t: f64, s: &SourceScenario) -> Result<f64> {
    s.require_regime(Regime::Below)?;
    check_point(x, t)?;
    let u = pulse_distance(t, s);
    let d = x * x + u * u;
    Ok(2.0 / PI * s.units.hbar_over_mass() * x * x * t / (d * d))
}

/// Stationary part, pulse part and their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    /// `exp(-i omega0 t) exp(-q0 x)`.
    pub stationary: Complex64,
    pub pulse: Complex64,
    pub sum: Complex64,
    /// `t > X0 / v` and `q0 x >= 3`.
    pub valid: bool,
}

pub fn psi_decomposed(x: f64, t: f64, s: &SourceScenario) -> Result<Decomposition> {
    s.require_regime(Regime::Below)?;
    require_positive("x", x)?;
    require_positive("t", t)?;
    let stationary = source_value(t, s) * psi_stationary(x, s)?;
    let pulse = psi_transient_pulse(x, t, s)?;
    Ok(Decomposition {
        stationary,
        pulse,
        sum: stationary + pulse,
        valid: decomposition_valid(x, t, s),
    })
}

pub fn decomposition_valid(x: f64, t: f64, s: &SourceScenario) -> bool {
    let q0 = s.wavenumber();
    let onset_time = 2.0 / q0 / s.group_velocity();
    t > onset_time && q0 * x >= config::DECOMPOSITION_MIN_Q0X
}

/// `R = exp(-2 q0 x) / |psi_tp|^2`; `+inf` where the pulse density vanishes.
pub fn interplay_ratio(x: f64, t: f64, s: &SourceScenario) -> Result<f64> {
    s.require_regime(Regime::Below)?;
    check_point(x, t)?;
    let pulse = pulse_density(x, t, s)?;
    let stationary = (-2.0 * s.wavenumber() * x).exp();
    if pulse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(stationary / pulse)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub x: f64,
    pub t: f64,
    pub psi: Complex64,
    pub density: f64,
}

impl FieldSample {
    pub fn new(x: f64, t: f64, psi: Complex64) -> Self {
        Self {
            x,
            t,
            psi,
            density: psi.norm_sqr(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutAxis {
    SpaceCutAtFixedT,
    TimeCutAtFixedX,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub axis: CutAxis,
    pub fixed_value: f64,
    pub samples: Vec<FieldSample>,
    pub scenario: SourceScenario,
}

fn require_increasing(name: &'static str, values: &[f64]) -> Result<()> {
    if values
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::InvalidParameter {
            name,
            reason: "samples must be strictly increasing".to_owned(),
        });
    }
    Ok(())
}

impl FieldGrid {
    /// `|psi(x, t)|^2` along `xs` at fixed `t`.
    pub fn space_cut(s: &SourceScenario, t: f64, xs: &[f64]) -> Result<Self> {
        Self::space_cut_with(s, t, xs, psi)
    }

    /// Same, with a caller-supplied field (e.g. the decomposition sum).
    pub fn space_cut_with<F>(s: &SourceScenario, t: f64, xs: &[f64], field: F) -> Result<Self>
    where
        F: Fn(f64, f64, &SourceScenario) -> Result<Complex64>,
    {
        require_positive("t", t)?;
        require_increasing("x", xs)?;
        let samples = xs
            .iter()
            .map(|&x| Ok(FieldSample::new(x, t, field(x, t, s)?)))
            .collect::<Result<_>>()?;
        Ok(Self {
            axis: CutAxis::SpaceCutAtFixedT,
            fixed_value: t,
            samples,
            scenario: s.clone(),
        })
    }

    /// `|psi(x, t)|^2` along `ts` at fixed `x`.
    pub fn time_cut(s: &SourceScenario, x: f64, ts: &[f64]) -> Result<Self> {
        Self::time_cut_with(s, x, ts, psi)
    }

    pub fn time_cut_with<F>(s: &SourceScenario, x: f64, ts: &[f64], field: F) -> Result<Self>
    where
        F: Fn(f64, f64, &SourceScenario) -> Result<Complex64>,
    {
        require_non_negative("x", x)?;
        require_increasing("t", ts)?;
        let samples = ts
            .iter()
            .map(|&t| Ok(FieldSample::new(x, t, field(x, t, s)?)))
            .collect::<Result<_>>()?;
        Ok(Self {
            axis: CutAxis::TimeCutAtFixedX,
            fixed_value: x,
            samples,
            scenario: s.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::UnitSystem;
    use proptest::prelude::*;

    fn below() -> SourceScenario {
        SourceScenario::natural_below(1.0).unwrap()
    }

    fn above() -> SourceScenario {
        SourceScenario::natural_above(1.0, 0.5).unwrap()
    }

    #[test]
    fn boundary_recovery_both_regimes() {
        for s in [
            below(),
            above(),
            SourceScenario::new(UnitSystem::ev_nm_fs(), 1.0, 0.5).unwrap(),
        ] {
            let x = 1e-9 / s.wavenumber();
            for t in [0.1, 1.0, 10.0, 100.0] {
                let got = psi(x, t, &s).unwrap();
                assert!((got - source_value(t, &s)).norm() <= 1e-6);
                assert_eq!(psi(0.0, t, &s).unwrap(), source_value(t, &s));
            }
        }
    }

    #[test]
    fn regime_mismatch_rejected() {
        assert!(matches!(
            psi_above(1.0, 1.0, &below()),
            Err(Error::WrongRegime { .. })
        ));
        assert!(matches!(
            psi_below(1.0, 1.0, &above()),
            Err(Error::WrongRegime { .. })
        ));
        assert!(pulse_density(1.0, 1.0, &above()).is_err());
        assert!(psi_below(1.0, 0.0, &below()).is_err());
    }

    #[test]
    fn below_long_time_density() {
        let s = below();
        for x in [0.5, 1.0, 2.0] {
            let d = psi_below(x, 1e5, &s).unwrap().norm_sqr();
            let st = (-2.0 * x).exp();
            assert!((d - st).abs() <= 0.05 * st);
        }
    }

    #[test]
    fn above_long_time_density_and_phase() {
        let s = above();
        let x = 2.0;
        let t = 1e5;
        let got = psi_above(x, t, &s).unwrap();
        assert!((got.norm_sqr() - 1.0).abs() < 0.05);
        let limit = source_value(t, &s) * psi_stationary(x, &s).unwrap();
        assert!((got - limit).norm() < 0.05);
    }

    #[test]
    fn main_front_arrival() {
        let s = above();
        let x = 20.0;
        let t_sc = x / s.group_velocity();
        assert!(psi_above(x, 0.5 * t_sc, &s).unwrap().norm_sqr() < 0.1);
        assert!(psi_above(x, 1.5 * t_sc, &s).unwrap().norm_sqr() > 0.5);
    }

    #[test]
    fn deep_pulse_density_near_prediction() {
        let s = below();
        let (x, t) = (10.0, 10.0);
        let exact = psi_below(x, t, &s).unwrap().norm_sqr();
        let pulse = pulse_density(x, t, &s).unwrap();
        assert!((exact - pulse).abs() <= 0.25 * pulse);
    }

    #[test]
    fn stationary_values() {
        let s = below();
        assert_eq!(psi_stationary(0.0, &s).unwrap(), Complex64::new(1.0, 0.0));
        let d = stationary_density(1.0, &s).unwrap();
        assert!((d - (-2.0f64).exp()).abs() < 1e-16);
        for x in [0.0, 0.3, 7.0] {
            assert!((stationary_density(x, &above()).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn pulse_density_special_points() {
        let s = SourceScenario::new(UnitSystem::ev_nm_fs(), 1.0, 0.5).unwrap();
        assert_eq!(pulse_density(0.0, 3.0, &s).unwrap(), 0.0);
        let x = 5.0;
        let t = x / s.group_velocity();
        let d = pulse_density(x, t, &s).unwrap();
        let expected = 1.0 / (2.0 * PI * s.wavenumber() * x);
        assert!((d / expected - 1.0).abs() < 1e-13);
        let late = pulse_density(x, 1e4 * t, &s).unwrap();
        let later = pulse_density(x, 2e4 * t, &s).unwrap();
        assert!((late / later / 8.0 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn pulse_amplitude_rejects_source_point() {
        assert!(psi_transient_pulse(0.0, 1.0, &below()).is_err());
        let amp = psi_transient_pulse_flagged(1.0, 1.0, &below()).unwrap();
        assert!(!amp.near_pole);
    }

    #[test]
    fn decomposition_matches_exact_past_onset() {
        let s = below();
        let x = 10.0;
        let t = 1.2 * 2.0 / s.group_velocity();
        let dec = psi_decomposed(x, t, &s).unwrap();
        assert!(dec.valid);
        let exact = psi_below(x, t, &s).unwrap().norm_sqr();
        assert!((dec.sum.norm_sqr() / exact - 1.0).abs() <= 0.05);
        assert!(!psi_decomposed(0.5, 30.0, &s).unwrap().valid);
        assert!(!psi_decomposed(10.0, 1.0, &s).unwrap().valid);
    }

    #[test]
    fn decomposition_equals_one_term_pieces() {
        let s = below();
        for (x, t) in [(4.0, 3.0), (10.0, 10.0), (20.0, 35.0)] {
            let dec = psi_decomposed(x, t, &s).unwrap();
            let pieces = moshinsky::m_one_term_pulse_pieces(x, t, &s).unwrap();
            let total = Complex64::from_polar(1.0, -s.barrier_frequency() * t)
                * (pieces.minus_iq + pieces.plus_iq);
            assert!((total - dec.sum).norm() <= 1e-12 * dec.sum.norm());
        }
    }

    #[test]
    fn interplay_ratio_limits() {
        let s = below();
        assert_eq!(interplay_ratio(0.0, 5.0, &s).unwrap(), f64::INFINITY);
        assert!(interplay_ratio(0.05, 5.0, &s).unwrap() > 1e2);
        assert!(interplay_ratio(30.0, 5.0, &s).unwrap() < 1e-10);
        // Strictly decreasing from the pulse peak outward.
        let t = 20.0;
        let mut prev = f64::INFINITY;
        for i in 0..400 {
            let x = t + 0.25 * i as f64;
            let r = interplay_ratio(x, t, &s).unwrap();
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn fluctuation_around_stationary_inside_onset() {
        let s = below();
        for x in [0.3f64, 1.0, 1.9] {
            let st = (-2.0 * x).exp();
            let signs: Vec<bool> = (1..4000)
                .map(|i| psi_below(x, 0.01 * i as f64, &s).unwrap().norm_sqr() > st)
                .collect();
            let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
            assert!(changes >= 2, "x = {x}: {changes}");
        }
    }

    #[test]
    fn grids_validate_ordering() {
        let s = below();
        let g = FieldGrid::space_cut(&s, 2.0, &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(g.samples.len(), 3);
        assert_eq!(g.axis, CutAxis::SpaceCutAtFixedT);
        assert!(FieldGrid::space_cut(&s, 2.0, &[0.0, 0.0]).is_err());
        assert!(FieldGrid::time_cut(&s, 1.0, &[2.0, 1.0]).is_err());
        assert!(FieldGrid::time_cut(&s, 1.0, &[0.0, 1.0]).is_err());
        let tc = FieldGrid::time_cut(&s, 1.0, &[1.0, 2.0]).unwrap();
        assert_eq!(tc.fixed_value, 1.0);
    }

    proptest! {
        #[test]
        fn pulse_amplitude_matches_density(x in 0.01f64..50.0, t in 0.01f64..80.0) {
            let s = below();
            let amp = psi_transient_pulse(x, t, &s).unwrap().norm_sqr();
            let dens = pulse_density(x, t, &s).unwrap();
            prop_assert!((amp / dens - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn pulse_density_scaling(x in 0.01f64..50.0, t in 0.01f64..80.0, eta in 0.1f64..20.0) {
            let s = below();
            let lhs = eta * pulse_density(eta * x, eta * t, &s).unwrap();
            let rhs = pulse_density(x, t, &s).unwrap();
            prop_assert!((lhs / rhs - 1.0).abs() <= 1e-13);
        }

        #[test]
        fn sample_density_is_norm(re in -5.0f64..5.0, im in -5.0f64..5.0) {
            let sample = FieldSample::new(1.0, 1.0, Complex64::new(re, im));
            prop_assert!((sample.density - (re * re + im * im)).abs() <= 1e-15 * sample.density);
        }
    }
}
