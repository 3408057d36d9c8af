//! Scenario files, parameter sweeps and simulation cross-checks.

mod compare;
mod scenario_file;
mod sweep;

use std::fmt;

use thiserror::Error;

pub use compare::{compare_sim_vs_analytic, Comparison, RateComparison, Tolerance};
pub use scenario_file::{parse_policy, parse_scenario, read_policy, read_scenario};
pub use sweep::{run_sweep, write_csv, Grid, SimCheck, SweepRow, SweepSpec, CSV_PRECISION};

/// A scenario or policy file problem, with the 1-based line it occurred on.
#[derive(Debug, Error, Clone, PartialEq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    pub(crate) fn file(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}
