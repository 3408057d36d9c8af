//! Sensing-duration policy optimization for an energy-harvesting cognitive
//! radio sharing a collision channel with an energy-harvesting primary user.
//!
//! The crate is organized bottom-up:
//!
//! * [`channel`] evaluates Rayleigh-fading outage probabilities and rates.
//! * [`scenario`] holds the validated inputs: arrival rates, the sensing
//!   table and randomized duration policies.
//! * [`rates`] gives closed-form mean service rates of the dominant system.
//! * [`lp`] is a dense-tableau simplex solver plus a brute-force vertex
//!   enumerator used as its oracle.
//! * [`optimizer`] maximizes the secondary service rate subject to primary
//!   stability by solving a linear-fractional and a linear subproblem.
//! * [`sim`] is a slot-level Monte Carlo of the four interacting queues.
//! * [`experiment`] covers scenario files, sweeps, CSV output and
//!   simulation-vs-analytics comparison.
//! * [`validation`] runs the end-to-end acceptance checks.

pub mod channel;
pub mod error;
pub mod experiment;
pub mod lp;
pub mod optimizer;
pub mod rates;
pub mod scenario;
pub mod sim;
pub mod validation;

pub use error::{Error, Result};

/// Numeric tolerances shared across the crate.
pub mod tol {
    /// Relative tolerance for floating comparisons in the analytics.
    pub const RELATIVE: f64 = 1e-9;
    /// Absolute tolerance on `sum(P) == 1` for a policy vector.
    pub const POLICY_SUM: f64 = 1e-9;
    /// Absolute constraint-satisfaction tolerance for LP and optimizer output.
    pub const FEASIBILITY: f64 = 1e-8;
}
