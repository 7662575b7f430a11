use serde::{Deserialize, Serialize};

use super::{FlightError, Result, STANDARD_GRAVITY};

pub const DEFAULT_SAFETY_FACTOR: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThrustSpec {
    /// Total predicted mass, kg.
    pub weight: f64,
    pub rotors: u32,
    /// Multiplier ≥ 1; 1.2 is a 20 % margin.
    pub safety: f64,
}

/// Per-rotor thrust `T = 2·w·s / n` in kilograms-force.
pub fn thrust_per_rotor(spec: &ThrustSpec) -> Result<f64> {
    if ![4, 6, 8].contains(&spec.rotors) {
        return Err(FlightError::BadRotorCount(spec.rotors));
    }
    if !(spec.safety >= 1.0) || !spec.safety.is_finite() {
        return Err(FlightError::SubUnitySafetyFactor(spec.safety));
    }
    if !(spec.weight >= 0.0) || !spec.weight.is_finite() {
        return Err(FlightError::NegativeWeight(spec.weight));
    }
    Ok(2.0 * spec.weight * spec.safety / spec.rotors as f64)
}

pub fn kgf_to_newtons(kgf: f64) -> f64 {
    kgf * STANDARD_GRAVITY
}
