//! Seeded synthetic curb images with known erased blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{Result, SidewalkError};
use crate::raster::Image;

/// A horizontal band of alternating bright/dark square blocks on a flat
/// background. Erased blocks are filled with `erased_level`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SidewalkSpec {
    pub block_length: usize,
    pub blocks: usize,
    /// Background rows above and below the band.
    pub margin: usize,
    pub bright: u8,
    pub dark: u8,
    pub erased_level: u8,
    pub background: u8,
    /// Whether block 0 is bright.
    pub first_bright: bool,
    pub erased: Vec<usize>,
    /// Standard deviation of additive Gaussian noise in gray levels.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SidewalkSpec {
    fn default() -> Self {
        Self {
            block_length: 16,
            blocks: 12,
            margin: 16,
            bright: 220,
            dark: 35,
            erased_level: 128,
            background: 128,
            first_bright: true,
            erased: Vec::new(),
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

impl SidewalkSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(SidewalkError::BadSpec(m.into()));
        if self.block_length == 0 || self.blocks == 0 {
            return bad("block_length and blocks must be positive");
        }
        if let Some(&e) = self.erased.iter().find(|&&e| e >= self.blocks) {
            return bad(&format!("erased block {e} out of range"));
        }
        if !(self.noise_sigma >= 0.0) || !self.noise_sigma.is_finite() {
            return bad("noise_sigma must be a finite non-negative number");
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.block_length * self.blocks
    }

    pub fn height(&self) -> usize {
        self.block_length + 2 * self.margin
    }

    pub fn band_rows(&self) -> std::ops::Range<usize> {
        self.margin..self.margin + self.block_length
    }

    /// Erased blocks, sorted and deduplicated.
    pub fn erased_set(&self) -> Vec<usize> {
        let mut e = self.erased.clone();
        e.sort_unstable();
        e.dedup();
        e
    }

    pub fn render(&self) -> Result<Image> {
        self.validate()?;
        let erased = self.erased_set();
        let band = self.band_rows();
        let (w, h) = (self.width(), self.height());
        let mut values = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                let b = x / self.block_length;
                let v = if !band.contains(&y) {
                    self.background
                } else if erased.binary_search(&b).is_ok() {
                    self.erased_level
                } else if (b % 2 == 0) == self.first_bright {
                    self.bright
                } else {
                    self.dark
                };
                values.push(v as f64);
            }
        }
        if self.noise_sigma > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            let normal = Normal::new(0.0, self.noise_sigma).expect("validated sigma");
            for v in &mut values {
                *v += normal.sample(&mut rng);
            }
        }
        let samples = values
            .into_iter()
            .map(|v| v.round().clamp(0.0, 255.0) as u8)
            .collect();
        Ok(Image::new(w, h, 1, samples)?)
    }
}

/// Draws an erased set where each block is erased with probability `p`,
/// rejecting any pick that would create a run longer than `max_run`.
pub fn random_erased(rng: &mut impl Rng, blocks: usize, p: f64, max_run: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut run = 0;
    for b in 0..blocks {
        if run < max_run && rng.random_bool(p) {
            out.push(b);
            run += 1;
        } else {
            run = 0;
        }
    }
    out
}
