//! Airframe sizing (component mass budget, per-rotor thrust) and a reduced
//! roll/pitch hover simulator for an octocopter with a moving arm.

mod mass;
mod sim;
mod thrust;

use thiserror::Error;

use crate::fuzzy::FuzzyError;

pub use mass::{load_mass_table, parse_mass_table, MassEntry, MassTable};
pub use sim::{simulate_hover, trace_csv, HoverState, Keyframe, SimConfig, SimSummary};
pub use thrust::{kgf_to_newtons, thrust_per_rotor, ThrustSpec, DEFAULT_SAFETY_FACTOR};

/// Standard gravity, m/s².
pub const STANDARD_GRAVITY: f64 = 9.80665;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum FlightError {
    #[error("mass table row {row}: {message}")]
    ParseError { row: usize, message: String },
    #[error("cannot read mass table: {0}")]
    Io(String),
    #[error("rotor count {0} unsupported (must be 4, 6 or 8)")]
    BadRotorCount(u32),
    #[error("safety factor {0} is below 1")]
    SubUnitySafetyFactor(f64),
    #[error("weight {0} kg must be finite and non-negative")]
    NegativeWeight(f64),
    #[error("invalid simulation config: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
}

pub type Result<T> = std::result::Result<T, FlightError>;
