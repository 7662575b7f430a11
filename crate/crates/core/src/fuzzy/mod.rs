//! Mamdani fuzzy inference (min-AND, clipped consequents, max aggregation,
//! discretized centroid) plus two controllers built on it: pesticide dosing
//! from canopy green density and zero-sum rotor thrust redistribution.

pub mod dosing;
mod membership;
pub mod stabilizer;
mod system;

use thiserror::Error;

pub use dosing::{pesticide_dose, DosingController};
pub use membership::MembershipFunction;
pub use stabilizer::{deltas_csv, rotor_azimuth, Stabilizer, ROTORS};
pub use system::{
    Clause, FuzzySystem, FuzzyVariable, LabeledSet, Rule, DEFAULT_SAMPLES, MIN_SAMPLES,
};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum FuzzyError {
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("variable '{variable}' has no label '{label}'")]
    UnknownLabel { variable: String, label: String },
    #[error("name '{0}' is declared more than once")]
    DuplicateName(String),
    #[error("variable '{0}' needs at least two labeled sets")]
    TooFewLabels(String),
    #[error("variable '{0}' has an empty or non-finite universe")]
    BadUniverse(String),
    #[error("set '{label}' of '{variable}' has breakpoints that decrease or leave the universe")]
    BadBreakpoints { variable: String, label: String },
    #[error("rule {0} has no antecedents")]
    EmptyAntecedent(usize),
    #[error("rule {rule}: '{variable}' is not an {expected} variable")]
    WrongRole {
        rule: usize,
        variable: String,
        expected: &'static str,
    },
    #[error("defuzzification needs at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error("no value supplied for input '{0}'")]
    MissingInput(String),
    #[error("input '{0}' is not a finite number")]
    NonFiniteInput(String),
    #[error("expected {expected} inputs, got {got}")]
    InputCount { expected: usize, got: usize },
    #[error("no rule fired for output '{0}'")]
    NoRuleFired(String),
    #[error("green density {0} outside [0, 1]")]
    DensityOutOfRange(f64),
    #[error("stabilizer system must have inputs {inputs:?} and one output")]
    BadStabilizerSystem { inputs: &'static [&'static str] },
    #[error("invalid document: {0}")]
    BadDocument(String),
}

pub type Result<T> = std::result::Result<T, FuzzyError>;
