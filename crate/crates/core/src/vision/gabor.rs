//! Real Gabor filter banks and patch texture descriptors.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{convolve_reflect, require_gray, ResponseMap, Result, VisionError};
use crate::raster::Image;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaborParams {
    /// Carrier wavelength λ in pixels.
    pub wavelength: f64,
    /// Orientation θ of the carrier's propagation axis, radians.
    pub orientation: f64,
    /// Gaussian envelope σ in pixels.
    pub sigma: f64,
    /// Envelope aspect γ (y′ compression).
    pub aspect: f64,
    /// Carrier phase ψ, radians.
    pub phase: f64,
}

impl GaborParams {
    pub fn new(wavelength: f64, orientation: f64, sigma: f64) -> Self {
        Self {
            wavelength,
            orientation,
            sigma,
            aspect: 0.5,
            phase: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.wavelength) {
            return Err(VisionError::BadGaborParams("wavelength must be positive"));
        }
        if !ok(self.sigma) {
            return Err(VisionError::BadGaborParams("sigma must be positive"));
        }
        if !ok(self.aspect) {
            return Err(VisionError::BadGaborParams("aspect must be positive"));
        }
        if !self.orientation.is_finite() || !self.phase.is_finite() {
            return Err(VisionError::BadGaborParams("angles must be finite"));
        }
        Ok(())
    }

    /// Kernel half-size covering ±3σ of the elongated envelope axis.
    pub fn radius(&self) -> usize {
        (3.0 * self.sigma * (1.0f64).max(1.0 / self.aspect)).ceil() as usize
    }
}

/// `n` evenly spaced orientations over [0, π) sharing one wavelength/σ.
pub fn orientation_bank(wavelength: f64, sigma: f64, n: usize) -> Vec<GaborParams> {
    (0..n)
        .map(|i| GaborParams::new(wavelength, PI * i as f64 / n as f64, sigma))
        .collect()
}

/// Samples `exp(-(x′² + γ²y′²)/2σ²) · cos(2πx′/λ + ψ)` on a square grid and
/// removes its mean, so constant regions filter to zero.
pub fn gabor_kernel(p: &GaborParams) -> Result<ResponseMap> {
    p.validate()?;
    let r = p.radius() as isize;
    let side = (2 * r + 1) as usize;
    let (s, c) = p.orientation.sin_cos();
    let mut values = Vec::with_capacity(side * side);
    for y in -r..=r {
        for x in -r..=r {
            let (x, y) = (x as f64, y as f64);
            let xr = x * c + y * s;
            let yr = -x * s + y * c;
            let env =
                (-(xr * xr + p.aspect * p.aspect * yr * yr) / (2.0 * p.sigma * p.sigma)).exp();
            values.push(env * (2.0 * PI * xr / p.wavelength + p.phase).cos());
        }
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter_mut().for_each(|v| *v -= mean);
    Ok(ResponseMap::new(side, side, values))
}

pub fn gabor_bank(img: &Image, params: &[GaborParams]) -> Result<Vec<ResponseMap>> {
    require_gray(img)?;
    if params.is_empty() {
        return Err(VisionError::EmptyBank);
    }
    params
        .iter()
        .map(|p| gabor_kernel(p).map(|k| convolve_reflect(img, &k)))
        .collect()
}

/// One descriptor per non-overlapping `patch × patch` tile (row-major tile
/// order): the mean absolute response of each bank member over the tile.
pub fn texture_features(responses: &[ResponseMap], patch: usize) -> Result<Vec<Vec<f64>>> {
    let first = responses.first().ok_or(VisionError::EmptyBank)?;
    let (w, h) = (first.width(), first.height());
    if patch == 0 || patch > w || patch > h {
        return Err(VisionError::BadPatchSize);
    }
    let mut out = Vec::new();
    for ty in 0..h / patch {
        for tx in 0..w / patch {
            let feat = responses
                .iter()
                .map(|m| {
                    let mut acc = 0.0;
                    for y in ty * patch..(ty + 1) * patch {
                        for x in tx * patch..(tx + 1) * patch {
                            acc += m.at(x, y).abs();
                        }
                    }
                    acc / (patch * patch) as f64
                })
                .collect();
            out.push(feat);
        }
    }
    Ok(out)
}
