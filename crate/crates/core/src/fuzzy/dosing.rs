//! Pesticide dose from canopy green density.

use std::sync::OnceLock;

use super::{
    FuzzyError, FuzzySystem, FuzzyVariable, MembershipFunction, Result, Rule, DEFAULT_SAMPLES,
};
use MembershipFunction::Triangular;

pub const INPUT: &str = "green_density";
pub const OUTPUT: &str = "dose";

/// A one-input, one-output system mapping density in [0, 1] to a dose in
/// liters per unit area.
#[derive(Debug, Clone, PartialEq)]
pub struct DosingController {
    system: FuzzySystem,
}

impl Default for DosingController {
    /// Low/Medium/High density (apexes 0, 0.5, 1) to Small/Moderate/Large
    /// doses on [0, 10] L (apexes 1, 5, 9), one rule per pair.
    fn default() -> Self {
        let density = FuzzyVariable::new(
            INPUT,
            [0.0, 1.0],
            "fraction",
            &[
                ("low", Triangular([0.0, 0.0, 0.5])),
                ("medium", Triangular([0.0, 0.5, 1.0])),
                ("high", Triangular([0.5, 1.0, 1.0])),
            ],
        );
        let dose = FuzzyVariable::new(
            OUTPUT,
            [0.0, 10.0],
            "L",
            &[
                ("small", Triangular([0.0, 1.0, 2.0])),
                ("moderate", Triangular([1.0, 5.0, 9.0])),
                ("large", Triangular([8.0, 9.0, 10.0])),
            ],
        );
        let rules = vec![
            Rule::new(&[(INPUT, "low")], (OUTPUT, "small")),
            Rule::new(&[(INPUT, "medium")], (OUTPUT, "moderate")),
            Rule::new(&[(INPUT, "high")], (OUTPUT, "large")),
        ];
        let system = FuzzySystem::new(vec![density], vec![dose], rules, DEFAULT_SAMPLES)
            .expect("default dosing system is valid");
        Self { system }
    }
}

impl DosingController {
    /// Wraps a system with exactly one input and one output.
    pub fn new(system: FuzzySystem) -> Result<Self> {
        if system.inputs().len() != 1 || system.outputs().len() != 1 {
            return Err(FuzzyError::BadDocument(
                "dosing system needs exactly one input and one output".into(),
            ));
        }
        Ok(Self { system })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::new(FuzzySystem::from_json(text)?)
    }

    pub fn system(&self) -> &FuzzySystem {
        &self.system
    }

    pub fn dose(&self, green_density: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&green_density) {
            return Err(FuzzyError::DensityOutOfRange(green_density));
        }
        Ok(self.system.infer_values(&[green_density])?[0])
    }
}

/// Dose from the default controller.
pub fn pesticide_dose(green_density: f64) -> Result<f64> {
    static DEFAULT: OnceLock<DosingController> = OnceLock::new();
    DEFAULT
        .get_or_init(DosingController::default)
        .dose(green_density)
}
