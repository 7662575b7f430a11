//! Otsu's threshold: the split `{<= t} / {> t}` of a gray histogram with the
//! largest between-class variance.

use super::{Result, VisionError};
use crate::raster::Histogram;

/// Between-class variance `w0 * w1 * (mu0 - mu1)^2` of the split at `t`.
/// Zero when either class is empty.
pub fn between_class_variance(hist: &Histogram, t: u8) -> f64 {
    let bins = hist.bins();
    let (mut n0, mut s0, mut n, mut s) = (0u64, 0u64, 0u64, 0u64);
    for (v, &c) in bins.iter().enumerate() {
        if v <= t as usize {
            n0 += c;
            s0 += c * v as u64;
        }
        n += c;
        s += c * v as u64;
    }
    variance_from_sums(n0, s0, n, s)
}

// N^2 * sigma_B^2 = (N*S0 - n0*S)^2 / (n0 * n1); the numerator is exact in
// i128 so identical splits always yield bit-identical scores.
fn variance_from_sums(n0: u64, s0: u64, n: u64, s: u64) -> f64 {
    let n1 = n - n0;
    if n0 == 0 || n1 == 0 {
        return 0.0;
    }
    let num = n as i128 * s0 as i128 - n0 as i128 * s as i128;
    let num = num as f64;
    let nf = n as f64;
    num * num / (n0 as f64 * n1 as f64) / (nf * nf)
}

/// Returns the threshold maximizing between-class variance, ties broken
/// toward the lowest level. A histogram with a single occupied level has no
/// split and is reported as [`VisionError::DegenerateHistogram`].
pub fn otsu_threshold(hist: &Histogram) -> Result<u8> {
    let bins = hist.bins();
    let n: u64 = bins.iter().sum();
    if n == 0 {
        return Err(VisionError::EmptyHistogram);
    }
    let s: u64 = bins.iter().enumerate().map(|(v, &c)| c * v as u64).sum();

    let (mut n0, mut s0) = (0u64, 0u64);
    let mut best: Option<(u8, f64)> = None;
    for (t, &c) in bins.iter().enumerate() {
        n0 += c;
        s0 += c * t as u64;
        let score = variance_from_sums(n0, s0, n, s);
        if score > best.map_or(0.0, |(_, b)| b) {
            best = Some((t as u8, score));
        }
    }
    match best {
        Some((t, _)) => Ok(t),
        None => {
            let value = bins.iter().position(|&c| c > 0).expect("nonempty") as u8;
            Err(VisionError::DegenerateHistogram { value })
        }
    }
}
