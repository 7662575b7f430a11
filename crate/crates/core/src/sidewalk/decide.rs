use serde::{Deserialize, Serialize};

use super::strip::{extract_strip, BlockStrip, DEFAULT_MIN_RESPONSE};
use super::{Result, SidewalkError};
use crate::neural::{HopfieldNet, NeuralError};
use crate::raster::{to_grayscale, Image};

/// The two stored paint patterns: bright-dark-bright and its inverse.
pub const VERTICES: [[i8; 3]; 2] = [[1, -1, 1], [-1, 1, -1]];

/// Hopfield memory holding [`VERTICES`].
pub fn vertex_net() -> HopfieldNet {
    let patterns: Vec<Vec<i8>> = VERTICES.iter().map(|v| v.to_vec()).collect();
    HopfieldNet::train(&patterns, 3).expect("vertices are bipolar")
}

/// Bright/dark cut-offs on normalized block means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub bright_min: f64,
    pub dark_max: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            bright_min: 0.7,
            dark_max: 0.3,
        }
    }
}

impl Thresholds {
    pub fn new(bright_min: f64, dark_max: f64) -> Result<Self> {
        let t = Self {
            bright_min,
            dark_max,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if 0.0 <= self.dark_max && self.dark_max < self.bright_min && self.bright_min <= 1.0 {
            Ok(())
        } else {
            Err(SidewalkError::BadThresholds {
                bright_min: self.bright_min,
                dark_max: self.dark_max,
            })
        }
    }
}

/// Three consecutive blocks starting at block `start`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentPattern {
    pub start: usize,
    pub means: [f64; 3],
}

/// Every stride-1 block triple of a strip.
pub fn segments(strip: &BlockStrip) -> Vec<SegmentPattern> {
    strip
        .blocks
        .windows(3)
        .enumerate()
        .map(|(start, w)| SegmentPattern {
            start,
            means: [w[0].mean, w[1].mean, w[2].mean],
        })
        .collect()
}

/// +1 for bright, −1 for dark, 0 for anything in between.
pub fn encode_ternary(seg: &SegmentPattern, thresholds: &Thresholds) -> Result<[i8; 3]> {
    thresholds.validate()?;
    Ok(seg.means.map(|m| {
        if m >= thresholds.bright_min {
            1
        } else if m <= thresholds.dark_max {
            -1
        } else {
            0
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "blocks", rename_all = "snake_case")]
pub enum Verdict {
    Intact,
    /// Absolute block indices that need repainting.
    PaintBlocks(Vec<usize>),
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaintDecision {
    pub start: usize,
    pub encoded: [i8; 3],
    pub vertex: Option<[i8; 3]>,
    pub verdict: Verdict,
}

const MAX_SWEEPS: usize = 10;

/// Recalls `encoded` through `net` and lists the blocks that disagree with
/// the attracting vertex. Inputs that do not settle on a stored pattern are
/// `Unresolved`.
pub fn classify_segment(start: usize, encoded: [i8; 3], net: &HopfieldNet) -> PaintDecision {
    let stored = |s: &[i8]| net.patterns().iter().any(|p| p.as_slice() == s);
    if stored(&encoded) {
        return PaintDecision {
            start,
            encoded,
            vertex: Some(encoded),
            verdict: Verdict::Intact,
        };
    }
    let unresolved = PaintDecision {
        start,
        encoded,
        vertex: None,
        verdict: Verdict::Unresolved,
    };
    match net.recall(&encoded, MAX_SWEEPS) {
        Ok(r) if stored(&r.state) => {
            let vertex = [r.state[0], r.state[1], r.state[2]];
            let blocks = (0..3)
                .filter(|&k| encoded[k] != vertex[k])
                .map(|k| start + k)
                .collect();
            PaintDecision {
                start,
                encoded,
                vertex: Some(vertex),
                verdict: Verdict::PaintBlocks(blocks),
            }
        }
        Ok(_) | Err(NeuralError::NonConvergent { .. }) => unresolved,
        Err(e) => panic!("ternary 3-vector rejected by a 3-neuron net: {e}"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InspectConfig {
    pub sigma: f64,
    pub block_length: usize,
    pub thresholds: Thresholds,
    pub min_response: f64,
}

impl Default for InspectConfig {
    fn default() -> Self {
        Self {
            sigma: 2.0,
            block_length: 16,
            thresholds: Thresholds::default(),
            min_response: DEFAULT_MIN_RESPONSE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InspectionReport {
    pub band_top: usize,
    pub band_height: usize,
    pub block_length: usize,
    pub block_means: Vec<f64>,
    pub decisions: Vec<PaintDecision>,
    /// Blocks flagged by at least one covering segment, ascending.
    pub flagged: Vec<usize>,
}

/// Full pipeline: strip, stride-1 segments, recall, any-vote merge. Returns
/// the report and a gray copy of the input with flagged blocks outlined at
/// 255.
pub fn inspect(img: &Image, cfg: &InspectConfig) -> Result<(InspectionReport, Image)> {
    cfg.thresholds.validate()?;
    let gray = to_grayscale(img);
    let strip = extract_strip(&gray, cfg.sigma, cfg.block_length, cfg.min_response)?;
    if strip.blocks.len() < 3 {
        return Err(SidewalkError::TooFewBlocks(strip.blocks.len()));
    }
    let net = vertex_net();
    let mut flags = vec![false; strip.blocks.len()];
    let mut decisions = Vec::new();
    for seg in segments(&strip) {
        let encoded = encode_ternary(&seg, &cfg.thresholds)?;
        let decision = classify_segment(seg.start, encoded, &net);
        if let Verdict::PaintBlocks(blocks) = &decision.verdict {
            for &b in blocks {
                flags[b] = true;
            }
        }
        decisions.push(decision);
    }
    let flagged: Vec<usize> = (0..flags.len()).filter(|&i| flags[i]).collect();

    let mut overlay = gray;
    let width = overlay.width();
    let samples = overlay.samples_mut();
    for &i in &flagged {
        let b = &strip.blocks[i];
        for y in b.y..b.y + b.height {
            for x in b.x..b.x + b.width {
                let edge =
                    y == b.y || y + 1 == b.y + b.height || x == b.x || x + 1 == b.x + b.width;
                if edge {
                    samples[y * width + x] = 255;
                }
            }
        }
    }

    let report = InspectionReport {
        band_top: strip.band_top,
        band_height: strip.band_height,
        block_length: cfg.block_length,
        block_means: strip.means(),
        decisions,
        flagged,
    };
    Ok((report, overlay))
}
