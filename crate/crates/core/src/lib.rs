//! Exact transient solutions for a point source switched on at the edge of a
//! step potential, the forerunner pulse they contain, and two independent
//! numerical oracles for cross-checking them.

pub mod config;
pub mod error;
pub mod faddeeva;
pub mod forerunner;
pub mod moshinsky;
pub mod oracle;
pub mod search;
pub mod units;
pub mod wavefield;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use units::{Regime, SourceScenario, UnitSystem};
