//! Driven-boundary Crank-Nicolson integration of the step problem on
//! `[0, L]`: `psi(0, t) = A exp(-i omega0 t)` for `t > 0`, zero initial
//! field, hard wall at `x = L`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{require_positive, Error, Result};
use crate::units::SourceScenario;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Domain length L.
    pub length: f64,
    /// Grid points including both walls.
    pub nx: usize,
    pub dt: f64,
    pub n_steps: usize,
}

pub const MIN_NX: usize = 64;

impl GridSpec {
    pub fn dx(&self) -> f64 {
        self.length / (self.nx - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.length * i as f64 / (self.nx - 1) as f64
    }

    pub fn final_time(&self) -> f64 {
        self.dt * self.n_steps as f64
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("L", self.length)?;
        require_positive("dt", self.dt)?;
        if self.nx < MIN_NX {
            return Err(Error::InvalidParameter {
                name: "nx",
                reason: format!("need at least {MIN_NX} points, got {}", self.nx),
            });
        }
        if self.n_steps == 0 {
            return Err(Error::InvalidParameter {
                name: "n_steps",
                reason: "need at least one step".to_owned(),
            });
        }
        Ok(())
    }
}

/// How the source value enters the boundary term of a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryTreatment {
    /// `2 g(t_n + dt/2)`.
    #[default]
    Midpoint,
    /// `g(t_n) + g(t_{n+1})` with `g(0) = 0`.
    Endpoints,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CnOptions {
    pub source_amplitude: f64,
    /// Keep every k-th state; 0 keeps only the final one.
    pub snapshot_every: usize,
    pub boundary: BoundaryTreatment,
    /// Source is set to zero from this time on.
    pub source_off_after: Option<f64>,
}

impl Default for CnOptions {
    fn default() -> Self {
        Self {
            source_amplitude: 1.0,
            snapshot_every: 0,
            boundary: BoundaryTreatment::default(),
            source_off_after: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CnState {
    pub t: f64,
    /// Values on all `nx` points, walls included.
    pub psi: Vec<Complex64>,
}

/// Front containment and accuracy checks. The front bound is
/// `CN_FRONT_SPEED_FACTOR` times the larger of the scenario's group velocity
/// and the free velocity at the source energy.
pub fn preflight(s: &SourceScenario, g: &GridSpec) -> Result<()> {
    g.validate()?;
    let free_speed = (2.0 * s.e0 / s.units.mass).sqrt();
    let speed = s.group_velocity().max(free_speed);
    let reach = config::CN_FRONT_SPEED_FACTOR * speed * g.final_time();
    if reach >= g.length {
        return Err(Error::Preflight(format!(
            "front reaches {reach} by t = {} but the wall is at L = {}",
            g.final_time(),
            g.length
        )));
    }
    let dx = g.dx();
    let limit = config::CN_ACCURACY_C * dx * dx / s.units.hbar_over_mass();
    if g.dt > limit {
        return Err(Error::Preflight(format!(
            "dt = {} exceeds the accuracy bound {limit} (C dx^2 m / hbar)",
            g.dt
        )));
    }
    Ok(())
}

pub fn cn_evolve(s: &SourceScenario, g: &GridSpec) -> Result<Vec<CnState>> {
    cn_evolve_with(s, g, &CnOptions::default())
}

pub fn cn_evolve_with(s: &SourceScenario, g: &GridSpec, opts: &CnOptions) -> Result<Vec<CnState>> {
    preflight(s, g)?;
    if !opts.source_amplitude.is_finite() {
        return Err(Error::NonFinite("source_amplitude"));
    }
    let n = g.nx - 2;
    let dx = g.dx();
    let kinetic = 0.5 * s.units.hbar_over_mass() / (dx * dx);
    let v = s.barrier_frequency();
    let a = Complex64::new(0.0, 0.5 * g.dt);
    let diag = 1.0 + a * (2.0 * kinetic + v);
    let off = -a * kinetic;
    let rhs_diag = 1.0 - a * (2.0 * kinetic + v);
    let rhs_off = a * kinetic;

    // Thomas factorisation of the constant matrix.
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
    let mut inv_denom = vec![Complex64::new(0.0, 0.0); n];
    let mut prev_c = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let denom = diag - off * prev_c;
        if denom.norm() == 0.0 || !denom.re.is_finite() || !denom.im.is_finite() {
            return Err(Error::SolverBreakdown(i));
        }
        inv_denom[i] = 1.0 / denom;
        c_prime[i] = off * inv_denom[i];
        prev_c = c_prime[i];
    }

    let omega0 = s.omega0();
    let source = |t: f64| -> Complex64 {
        let off_now = opts.source_off_after.is_some_and(|t1| t >= t1);
        if t <= 0.0 || off_now {
            Complex64::new(0.0, 0.0)
        } else {
            opts.source_amplitude * Complex64::from_polar(1.0, -omega0 * t)
        }
    };

    let mut psi = vec![Complex64::new(0.0, 0.0); n];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    let mut snapshots = Vec::new();
    let full = |t: f64, interior: &[Complex64]| -> CnState {
        let mut values = Vec::with_capacity(n + 2);
        values.push(source(t));
        values.extend_from_slice(interior);
        values.push(Complex64::new(0.0, 0.0));
        CnState { t, psi: values }
    };

    for step in 0..g.n_steps {
        let t0 = step as f64 * g.dt;
        let t1 = (step + 1) as f64 * g.dt;
        for i in 0..n {
            let left = if i > 0 {
                psi[i - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let right = if i + 1 < n {
                psi[i + 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            rhs[i] = rhs_diag * psi[i] + rhs_off * (left + right);
        }
        let boundary = match opts.boundary {
            BoundaryTreatment::Midpoint => {
                let t_mid = t0 + 0.5 * g.dt;
                // A switch-off inside this step is taken at the step edge.
                if source(t1) == Complex64::new(0.0, 0.0) {
                    Complex64::new(0.0, 0.0)
                } else {
                    2.0 * source(t_mid)
                }
            }
            BoundaryTreatment::Endpoints => source(t0) + source(t1),
        };
        rhs[0] += rhs_off * boundary;

        // Forward sweep then back substitution.
        let mut prev = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let d = (rhs[i] - off * prev) * inv_denom[i];
            rhs[i] = d;
            prev = d;
        }
        psi[n - 1] = rhs[n - 1];
        for i in (0..n - 1).rev() {
            psi[i] = rhs[i] - c_prime[i] * psi[i + 1];
        }
        if !(psi[0].re.is_finite() && psi[0].im.is_finite()) {
            return Err(Error::SolverBreakdown(0));
        }
        let keep = opts.snapshot_every > 0 && (step + 1) % opts.snapshot_every == 0;
        if keep || step + 1 == g.n_steps {
            snapshots.push(full(t1, &psi));
        }
    }
    Ok(snapshots)
}

/// `sum |psi|^2 dx` over the interior points.
pub fn interior_norm(state: &CnState, g: &GridSpec) -> f64 {
    let inner = &state.psi[1..state.psi.len() - 1];
    inner.iter().map(|p| p.norm_sqr()).sum::<f64>() * g.dx()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavefield;

    fn grid(nx: usize, dt: f64, steps: usize) -> GridSpec {
        GridSpec {
            length: 100.0,
            nx,
            dt,
            n_steps: steps,
        }
    }

    #[test]
    fn zero_source_gives_zero_field() {
        let s = crate::SourceScenario::natural_below(1.0).unwrap();
        let opts = CnOptions {
            source_amplitude: 0.0,
            snapshot_every: 50,
            ..CnOptions::default()
        };
        let states = cn_evolve_with(&s, &grid(257, 0.01, 200), &opts).unwrap();
        assert_eq!(states.len(), 4);
        for st in states {
            assert!(st.psi.iter().all(|p| *p == Complex64::new(0.0, 0.0)));
        }
    }

    #[test]
    fn preflight_rejects_escaping_front() {
        let s = crate::SourceScenario::natural_below(1.0).unwrap();
        assert!(matches!(
            preflight(&s, &grid(257, 0.01, 5000)),
            Err(Error::Preflight(_))
        ));
        assert!(matches!(
            preflight(&s, &grid(4097, 0.1, 10)),
            Err(Error::Preflight(_))
        ));
        assert!(preflight(&s, &grid(32, 0.01, 10)).is_err());
        assert!(preflight(&s, &grid(257, 0.01, 100)).is_ok());
    }

    #[test]
    fn boundary_value_is_driven() {
        let s = crate::SourceScenario::natural_below(1.0).unwrap();
        let opts = CnOptions {
            snapshot_every: 7,
            ..CnOptions::default()
        };
        let states = cn_evolve_with(&s, &grid(257, 0.01, 70), &opts).unwrap();
        for st in states {
            assert_eq!(st.psi[0], wavefield::source_value(st.t, &s));
            assert_eq!(*st.psi.last().unwrap(), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn interior_norm_conserved_after_switch_off() {
        let s = crate::SourceScenario::natural_below(1.0).unwrap();
        for boundary in [BoundaryTreatment::Midpoint, BoundaryTreatment::Endpoints] {
            let opts = CnOptions {
                snapshot_every: 1,
                source_off_after: Some(0.5),
                boundary,
                ..CnOptions::default()
            };
            let g = grid(513, 0.005, 400);
            let states = cn_evolve_with(&s, &g, &opts).unwrap();
            let after: Vec<f64> = states
                .iter()
                .filter(|st| st.t > 0.5 + 1.5 * g.dt)
                .map(|st| interior_norm(st, &g))
                .collect();
            assert!(after[0] > 1e-3);
            for w in after.windows(2) {
                assert!((w[1] - w[0]).abs() <= 1e-10 * w[0]);
            }
        }
    }

    #[test]
    fn free_propagation_near_source() {
        let s = crate::SourceScenario::natural_above(1.0, 0.0).unwrap();
        let g = GridSpec {
            length: 100.0,
            nx: 2049,
            dt: 0.002,
            n_steps: 1000,
        };
        let st = cn_evolve(&s, &g).unwrap().pop().unwrap();
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..g.nx {
            let x = g.x(i);
            if x > 5.0 {
                break;
            }
            let exact = wavefield::psi(x, st.t, &s).unwrap();
            num += (st.psi[i] - exact).norm_sqr();
            den += exact.norm_sqr();
        }
        assert!((num / den).sqrt() < 1e-2);
    }
}
