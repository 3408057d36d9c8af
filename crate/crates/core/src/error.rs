use thiserror::Error;

use crate::experiment::ParseError;
use crate::lp::LpError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sensing duration {tau} s leaves no transmission time in a {slot} s slot")]
    NoTransmissionTime { tau: f64, slot: f64 },

    #[error("policy has {policy} entries but the sensing table has {table}")]
    DimensionMismatch { policy: usize, table: usize },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("linear-fractional program is degenerate: {0}")]
    DegenerateFractional(String),

    #[error("recovered policy violates `{constraint}` by {violation:e}")]
    Recovery {
        constraint: &'static str,
        violation: f64,
    },

    #[error("run too short for a stability verdict: {measured} measured slots, need at least {required}")]
    RunTooShort { measured: u64, required: u64 },

    #[error(transparent)]
    Lp(#[from] LpError),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{value} is not a probability in [0, 1]")))
    }
}
