//! Classical vision primitives: thresholding, vegetation density, wavelet
//! and Gabor filtering, Hough voting, PCA, and thermal radiance conversion.

mod convolve;
pub mod gabor;
pub mod green;
pub mod hough;
pub mod otsu;
pub mod pca;
pub mod thermal;
pub mod wavelet;

use thiserror::Error;

use crate::raster::Image;

pub use convolve::convolve_reflect;
pub use gabor::{gabor_bank, gabor_kernel, orientation_bank, texture_features, GaborParams};
pub use green::{green_density, GreenDensity, DEFAULT_EXG_THRESHOLD};
pub use hough::{distinct_circles, distinct_lines, hough_circles, hough_lines, CircleHit, LineHit};
pub use otsu::{between_class_variance, otsu_threshold};
pub use pca::{pca_project, Pca};
pub use thermal::{radiance_to_temperature, temperature_to_radiance, STEFAN_BOLTZMANN};
pub use wavelet::{mexican_hat, mexican_hat_kernel, wavelet_response};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum VisionError {
    #[error("histogram is empty")]
    EmptyHistogram,
    #[error("degenerate histogram: all mass in gray level {value}")]
    DegenerateHistogram { value: u8 },
    #[error("image must be single-channel grayscale")]
    NotGrayscale,
    #[error("image must be 3-channel RGB")]
    NotRgb,
    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),
    #[error("bad radius range [{r_min}, {r_max}]")]
    BadRadiusRange { r_min: usize, r_max: usize },
    #[error("theta step {0} must be a positive divisor of 180")]
    BadThetaStep(u32),
    #[error("filter bank is empty")]
    EmptyBank,
    #[error("invalid Gabor parameters: {0}")]
    BadGaborParams(&'static str),
    #[error("PCA needs at least two vectors")]
    TooFewVectors,
    #[error("vectors have inconsistent or zero dimension")]
    DimensionMismatch,
    #[error("requested {k} components from {dim}-dimensional data")]
    BadComponentCount { k: usize, dim: usize },
    #[error("all vectors are identical; covariance is zero")]
    ZeroVariance,
    #[error("negative radiance {0} W/m^2")]
    NegativeRadiance(f64),
    #[error("negative temperature {0} K")]
    NegativeTemperature(f64),
    #[error("patch size must be positive and fit the image")]
    BadPatchSize,
}

pub type Result<T> = std::result::Result<T, VisionError>;

/// A dense grid of signed real responses (filter outputs or kernels).
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl ResponseMap {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), width * height, "response map size mismatch");
        Self {
            width,
            height,
            values,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn mean_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() / self.values.len() as f64
    }

    pub fn flip_horizontal(&self) -> ResponseMap {
        let mut values = Vec::with_capacity(self.values.len());
        for row in self.values.chunks(self.width) {
            values.extend(row.iter().rev());
        }
        ResponseMap { values, ..*self }
    }

    pub fn flip_vertical(&self) -> ResponseMap {
        let mut values = Vec::with_capacity(self.values.len());
        for row in self.values.chunks(self.width).rev() {
            values.extend_from_slice(row);
        }
        ResponseMap { values, ..*self }
    }

    /// Min-max scaled to 0..=255 as a gray image; a flat map becomes all 0.
    pub fn to_image(&self) -> Image {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        let span = hi - lo;
        let samples = self
            .values
            .iter()
            .map(|&v| {
                if span > 0.0 {
                    ((v - lo) / span * 255.0).round() as u8
                } else {
                    0
                }
            })
            .collect();
        Image::new(self.width, self.height, 1, samples).expect("nonempty response map")
    }
}

pub(crate) fn require_gray(img: &Image) -> Result<()> {
    if img.is_gray() {
        Ok(())
    } else {
        Err(VisionError::NotGrayscale)
    }
}
