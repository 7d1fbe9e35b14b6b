//! Tunable numerical constants shared by the analysis and oracle layers.

/// Minimum q0 x for the stationary-plus-pulse decomposition to be flagged valid.
pub const DECOMPOSITION_MIN_Q0X: f64 = 3.0;

/// Time window for the numeric time-cut maximum, in units of tau.
pub const PULSE_WINDOW_TAU: (f64, f64) = (0.2, 5.0);

/// Log-spaced pre-scan density before golden-section refinement.
pub const PRESCAN_POINTS_PER_DECADE: usize = 21;

/// Relative tolerance of golden-section refinement.
pub const EXTREMUM_REL_TOL: f64 = 1e-6;

/// Relative tolerance of the crossover root.
pub const CROSSOVER_REL_TOL: f64 = 1e-10;

/// Upper end of the space-cut search window, in units of v t_f.
pub const SPACE_CUT_REACH: f64 = 6.0;

/// |y| below which the individual 1/y terms of the pulse amplitude are
/// replaced by their combined closed form.
pub const PULSE_POLE_GUARD: f64 = 1e-8;

/// Crank-Nicolson accuracy heuristic: dt <= C dx^2.
pub const CN_ACCURACY_C: f64 = 1.0;

/// Signal-front speed bound used by the containment preflight, in units of
/// the fastest group velocity of the scenario.
pub const CN_FRONT_SPEED_FACTOR: f64 = 3.0;

/// Default Talbot node count.
pub const TALBOT_NODES: usize = 64;

/// Fraction of the contour's geometric pole capacity that is accepted; the
/// inversion error is about 1e-8 at this fraction and grows tenfold for every
/// further 0.05.
pub const TALBOT_POLE_FRACTION: f64 = 0.6;
