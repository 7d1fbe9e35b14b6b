//! Unit systems and the kinematic quantities derived from a source scenario.
//!
//! All arithmetic happens in whatever unit system the scenario carries. The
//! two built-in systems are `natural` (hbar = m = 1) and `ev-nm-fs`
//! (energies in eV, lengths in nm, times in fs, free-electron mass).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};

/// Reduced Planck constant in eV fs.
pub const HBAR_EV_FS: f64 = 0.6582119569;
/// Electron rest energy in eV.
pub const ELECTRON_REST_ENERGY_EV: f64 = 510998.95;
/// Speed of light in nm/fs.
pub const SPEED_OF_LIGHT_NM_PER_FS: f64 = 299.792458;

/// Electron mass in eV fs^2 / nm^2 (about 5.685630).
pub fn electron_mass_ev_fs2_per_nm2() -> f64 {
    ELECTRON_REST_ENERGY_EV / (SPEED_OF_LIGHT_NM_PER_FS * SPEED_OF_LIGHT_NM_PER_FS)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    /// Action, energy x time.
    pub hbar: f64,
    /// Mass, energy x time^2 / length^2.
    pub mass: f64,
    pub label: String,
}

impl UnitSystem {
    pub fn new(hbar: f64, mass: f64, label: impl Into<String>) -> Result<Self> {
        require_positive("hbar", hbar)?;
        require_positive("mass", mass)?;
        Ok(Self {
            hbar,
            mass,
            label: label.into(),
        })
    }

    /// hbar = 1, m = 1.
    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            label: "natural".to_owned(),
        }
    }

    /// eV, nm, fs with the free-electron mass.
    pub fn ev_nm_fs() -> Self {
        Self {
            hbar: HBAR_EV_FS,
            mass: electron_mass_ev_fs2_per_nm2(),
            label: "ev-nm-fs".to_owned(),
        }
    }

    /// Looks up a built-in system by its label.
    pub fn by_label(label: &str) -> Result<Self> {
        match label {
            "natural" => Ok(Self::natural()),
            "ev-nm-fs" => Ok(Self::ev_nm_fs()),
            other => Err(Error::InvalidParameter {
                name: "units",
                reason: format!("unknown unit system `{other}` (expected natural or ev-nm-fs)"),
            }),
        }
    }

    /// Same system with a different particle mass (effective-mass runs).
    pub fn with_mass(&self, mass: f64) -> Result<Self> {
        Self::new(self.hbar, mass, self.label.clone())
    }

    pub fn hbar_over_mass(&self) -> f64 {
        self.hbar / self.mass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// E0 > V0: propagating waves inside the step.
    Above,
    /// E0 < V0: evanescent stationary wave plus the transient forerunner.
    Below,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Above => f.write_str("above-barrier"),
            Regime::Below => f.write_str("below-barrier"),
        }
    }
}

/// A monochromatic point source at x = 0, switched on at t = 0, emitting
/// into the step V(x) = V0 for x > 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceScenario {
    pub units: UnitSystem,
    pub v0: f64,
    pub e0: f64,
    pub regime: Regime,
}

impl SourceScenario {
    pub fn new(units: UnitSystem, v0: f64, e0: f64) -> Result<Self> {
        require_non_negative("V0", v0)?;
        require_positive("E0", e0)?;
        let tol = 4.0 * f64::EPSILON * v0.abs().max(e0.abs());
        if (e0 - v0).abs() <= tol {
            return Err(Error::DegenerateScenario(e0));
        }
        let regime = if e0 > v0 {
            Regime::Above
        } else {
            Regime::Below
        };
        Ok(Self {
            units,
            v0,
            e0,
            regime,
        })
    }

    /// Below-barrier scenario in natural units with the given decay constant.
    ///
    /// The overall energy offset only enters through a global phase, so the
    /// step height is fixed at `q0^2` (source energy `q0^2 / 2`).
    pub fn natural_below(q0: f64) -> Result<Self> {
        require_positive("q0", q0)?;
        Self::new(UnitSystem::natural(), q0 * q0, 0.5 * q0 * q0)
    }

    /// Above-barrier scenario in natural units with `E0 - V0 = k0^2 / 2`.
    pub fn natural_above(k0: f64, v0: f64) -> Result<Self> {
        require_positive("k0", k0)?;
        Self::new(UnitSystem::natural(), v0, v0 + 0.5 * k0 * k0)
    }

    /// Source angular frequency E0 / hbar.
    pub fn omega0(&self) -> f64 {
        self.e0 / self.units.hbar
    }

    /// Step height as an angular frequency, V0 / hbar.
    pub fn barrier_frequency(&self) -> f64 {
        self.v0 / self.units.hbar
    }

    pub fn require_regime(&self, expected: Regime) -> Result<()> {
        if self.regime == expected {
            Ok(())
        } else {
            Err(Error::WrongRegime {
                expected,
                actual: self.regime,
            })
        }
    }

    /// k0 in the above regime, q0 in the below regime; always positive.
    pub fn wavenumber(&self) -> f64 {
        let gap = (self.e0 - self.v0).abs();
        (2.0 * self.units.mass * gap).sqrt() / self.units.hbar
    }

    pub fn group_velocity(&self) -> f64 {
        self.units.hbar_over_mass() * self.wavenumber()
    }

    /// Stationary decay length 1/q0.
    pub fn penetration_length(&self) -> Result<f64> {
        self.require_regime(Regime::Below)?;
        Ok(1.0 / self.wavenumber())
    }

    /// tau = x_f / v_q0.
    pub fn traversal_time(&self, x_f: f64) -> Result<f64> {
        self.require_regime(Regime::Below)?;
        require_positive("x_f", x_f)?;
        Ok(x_f / self.group_velocity())
    }

    /// Natural-unit scales for this scenario with the given energy unit.
    pub fn natural_scales(&self, energy_unit: f64) -> Result<NaturalScales> {
        require_positive("energy_unit", energy_unit)?;
        let hbar = self.units.hbar;
        Ok(NaturalScales {
            energy: energy_unit,
            time: hbar / energy_unit,
            length: hbar / (self.units.mass * energy_unit).sqrt(),
        })
    }

    /// Re-expresses the scenario in natural units (hbar = m = 1).
    pub fn to_natural(&self, scales: &NaturalScales) -> Result<Self> {
        Self::new(
            UnitSystem::natural(),
            self.v0 / scales.energy,
            self.e0 / scales.energy,
        )
    }

    /// Inverse of [`SourceScenario::to_natural`]: the natural-unit scenario
    /// `self` expressed back in `units` through `scales`.
    pub fn from_natural(&self, units: UnitSystem, scales: &NaturalScales) -> Result<Self> {
        Self::new(units, self.v0 * scales.energy, self.e0 * scales.energy)
    }
}

/// Energy, length and time units that make hbar = m = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaturalScales {
    pub energy: f64,
    pub length: f64,
    pub time: f64,
}

/// k0 (above) or q0 (below) for the scenario.
pub fn derive_wavenumber(s: &SourceScenario) -> Result<f64> {
    // Scenarios built through `new` are never degenerate; guard hand-built ones.
    let tol = 4.0 * f64::EPSILON * s.v0.abs().max(s.e0.abs());
    if (s.e0 - s.v0).abs() <= tol {
        return Err(Error::DegenerateScenario(s.e0));
    }
    Ok(s.wavenumber())
}

/// hbar * wavenumber / m.
pub fn group_velocity(s: &SourceScenario) -> Result<f64> {
    Ok(s.units.hbar_over_mass() * derive_wavenumber(s)?)
}

pub fn penetration_length(s: &SourceScenario) -> Result<f64> {
    s.penetration_length()
}

pub fn traversal_time(s: &SourceScenario, x_f: f64) -> Result<f64> {
    s.traversal_time(x_f)
}
