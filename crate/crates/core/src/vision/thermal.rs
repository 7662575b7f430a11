//! Total-emission blackbody conversion between radiant exitance and
//! temperature.
//!
//! Long-wave (8–14 μm) and mid-wave (3–5 μm) sensors differ only in the band
//! they integrate; the conversion here uses total emission throughout.

use super::{Result, VisionError};

/// Stefan–Boltzmann constant, W·m⁻²·K⁻⁴ (CODATA 2018, exact in SI).
pub const STEFAN_BOLTZMANN: f64 = 5.670374419e-8;

/// Spectral band a thermal camera integrates over, in micrometres.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThermalBand {
    LongWave,
    MidWave,
}

impl ThermalBand {
    pub fn wavelength_range_um(self) -> (f64, f64) {
        match self {
            ThermalBand::LongWave => (8.0, 14.0),
            ThermalBand::MidWave => (3.0, 5.0),
        }
    }
}

/// `T = (P / σ)^(1/4)`.
pub fn radiance_to_temperature(power_density: f64) -> Result<f64> {
    if power_density < 0.0 || power_density.is_nan() {
        return Err(VisionError::NegativeRadiance(power_density));
    }
    Ok((power_density / STEFAN_BOLTZMANN).powf(0.25))
}

/// `P = σ · T⁴`.
pub fn temperature_to_radiance(temperature: f64) -> Result<f64> {
    if temperature < 0.0 || temperature.is_nan() {
        return Err(VisionError::NegativeTemperature(temperature));
    }
    Ok(STEFAN_BOLTZMANN * temperature.powi(4))
}
