//! Curb-paint inspection: find the striped curb band by wavelet energy, cut
//! it into blocks, encode each block triple as a ternary vector and let a
//! two-vertex Hopfield memory decide which blocks lost their paint.

mod decide;
mod strip;
pub mod synth;

use thiserror::Error;

use crate::raster::RasterError;
use crate::vision::VisionError;

pub use decide::{
    classify_segment, encode_ternary, inspect, segments, vertex_net, InspectConfig,
    InspectionReport, PaintDecision, SegmentPattern, Thresholds, Verdict, VERTICES,
};
pub use strip::{extract_strip, Block, BlockStrip, DEFAULT_MIN_RESPONSE};
pub use synth::{random_erased, SidewalkSpec};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SidewalkError {
    #[error("no curb strip found: best band response {best:.4} is below the floor {floor}")]
    NoStripFound { best: f64, floor: f64 },
    #[error("image {width}x{height} is smaller than one {block_length}-pixel block")]
    ImageTooSmall {
        width: usize,
        height: usize,
        block_length: usize,
    },
    #[error("block length must be positive")]
    BadBlockLength,
    #[error("thresholds need 0 <= dark_max < bright_min <= 1, got dark_max {dark_max}, bright_min {bright_min}")]
    BadThresholds { bright_min: f64, dark_max: f64 },
    #[error("strip has {0} blocks; at least 3 are needed for one segment")]
    TooFewBlocks(usize),
    #[error("invalid generator parameters: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Vision(#[from] VisionError),
    #[error(transparent)]
    Raster(#[from] RasterError),
}

pub type Result<T> = std::result::Result<T, SidewalkError>;
