use serde::{Deserialize, Serialize};

use super::{Result, SidewalkError};
use crate::raster::Image;
use crate::vision::{wavelet_response, VisionError};

/// Default floor on the mean absolute wavelet response inside the chosen
/// band. A clean 220/35 stripe pattern at σ = 2 scores near 290, flat gray
/// with σ = 10 noise near 20.
pub const DEFAULT_MIN_RESPONSE: f64 = 50.0;

/// One rectangular block of the strip with its mean intensity in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
    pub mean: f64,
}

/// Consecutive, non-overlapping blocks along a horizontal band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockStrip {
    pub blocks: Vec<Block>,
    pub source_width: usize,
    pub source_height: usize,
    pub band_top: usize,
    pub band_height: usize,
    /// Mean absolute wavelet response over the band.
    pub response: f64,
}

impl BlockStrip {
    pub fn means(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| b.mean).collect()
    }
}

/// Locates the band of `block_length` rows with the largest summed absolute
/// Mexican-hat response and splits it into square blocks from the left edge.
/// Columns past the last whole block are ignored.
pub fn extract_strip(
    img: &Image,
    sigma: f64,
    block_length: usize,
    min_response: f64,
) -> Result<BlockStrip> {
    if !img.is_gray() {
        return Err(VisionError::NotGrayscale.into());
    }
    if block_length == 0 {
        return Err(SidewalkError::BadBlockLength);
    }
    let (w, h) = (img.width(), img.height());
    if w < block_length || h < block_length {
        return Err(SidewalkError::ImageTooSmall {
            width: w,
            height: h,
            block_length,
        });
    }
    let response = wavelet_response(img, sigma)?;
    let row_energy: Vec<f64> = response
        .values()
        .chunks(w)
        .map(|row| row.iter().map(|v| v.abs()).sum())
        .collect();

    let mut window: f64 = row_energy[..block_length].iter().sum();
    let (mut best_top, mut best) = (0, window);
    for top in 1..=h - block_length {
        window += row_energy[top + block_length - 1] - row_energy[top - 1];
        if window > best {
            best = window;
            best_top = top;
        }
    }
    // Recompute the winner exactly; the running sum drifts slightly.
    let best: f64 = row_energy[best_top..best_top + block_length].iter().sum();
    let mean_response = best / (block_length * w) as f64;
    if !(mean_response >= min_response) {
        return Err(SidewalkError::NoStripFound {
            best: mean_response,
            floor: min_response,
        });
    }

    let area = (block_length * block_length) as f64;
    let blocks = (0..w / block_length)
        .map(|i| {
            let x0 = i * block_length;
            let mut sum = 0u64;
            for y in best_top..best_top + block_length {
                for x in x0..x0 + block_length {
                    sum += img.gray_at(x, y) as u64;
                }
            }
            Block {
                x: x0,
                y: best_top,
                width: block_length,
                height: block_length,
                mean: sum as f64 / area / 255.0,
            }
        })
        .collect();
    Ok(BlockStrip {
        blocks,
        source_width: w,
        source_height: h,
        band_top: best_top,
        band_height: block_length,
        response: mean_response,
    })
}
