use std::fmt;

use thiserror::Error;

/// The density-matrix invariant that failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Hermiticity,
    Trace,
    Positivity,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Hermiticity => "hermiticity",
            Invariant::Trace => "trace",
            Invariant::Positivity => "positivity",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// `location` carries the offending matrix indices when the violation is
    /// attributable to a single entry pair.
    #[error("{invariant} violation: magnitude {magnitude:e}{}", fmt_location(.location))]
    Validation {
        invariant: Invariant,
        magnitude: f64,
        location: Option<(usize, usize)>,
    },

    #[error("objective is not finite ({value}) at theta={theta}, phi={phi}")]
    NonFiniteObjective { theta: f64, phi: f64, value: f64 },

    #[error("numerical inconsistency: {0}")]
    Numerical(String),

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("filter removed the state (success probability {0:e})")]
    FilteredToNothing(f64),
}

fn fmt_location(location: &Option<(usize, usize)>) -> String {
    match location {
        Some((i, j)) => format!(" at ({i}, {j})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// The failed invariant, if this is a validation error.
    pub fn invariant(&self) -> Option<Invariant> {
        match self {
            Error::Validation { invariant, .. } => Some(*invariant),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
