//! Hough voting for straight lines (ρ, θ) and circles (cx, cy, r).
//!
//! Any nonzero pixel of the input counts as an edge. Hits come back sorted
//! by votes, descending; among equal votes the cell whose voters fit it
//! best (smallest summed rounding residual) comes first, then the lowest
//! parameters.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{require_gray, Result, VisionError};
use crate::raster::Image;

/// A line `ρ = x·cosθ + y·sinθ`, origin at the top-left pixel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineHit {
    pub rho: i32,
    /// Degrees in `[0, 180)`.
    pub theta: u32,
    pub votes: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleHit {
    pub cx: usize,
    pub cy: usize,
    pub radius: usize,
    pub votes: u32,
}

fn edge_pixels(img: &Image) -> Vec<(usize, usize)> {
    let w = img.width();
    img.samples()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0)
        .map(|(i, _)| (i % w, i / w))
        .collect()
}

fn by_votes_then_fit(a: (u32, f64), b: (u32, f64)) -> Ordering {
    b.0.cmp(&a.0).then(a.1.total_cmp(&b.1))
}

pub fn hough_lines(edges: &Image, theta_step: u32, threshold: u32) -> Result<Vec<LineHit>> {
    require_gray(edges)?;
    if theta_step == 0 || 180 % theta_step != 0 {
        return Err(VisionError::BadThetaStep(theta_step));
    }
    let (w, h) = (edges.width() as f64, edges.height() as f64);
    let rmax = (w * w + h * h).sqrt().ceil() as i64;
    let n_rho = (2 * rmax + 1) as usize;
    let thetas: Vec<u32> = (0..180).step_by(theta_step as usize).collect();
    let trig: Vec<(f64, f64)> = thetas
        .iter()
        .map(|&t| (t as f64).to_radians().sin_cos())
        .collect();

    let mut votes = vec![0u32; thetas.len() * n_rho];
    let mut residual = vec![0.0f64; thetas.len() * n_rho];
    for (x, y) in edge_pixels(edges) {
        for (ti, &(s, c)) in trig.iter().enumerate() {
            let rho = x as f64 * c + y as f64 * s;
            let bin = rho.round();
            let cell = ti * n_rho + (bin as i64 + rmax) as usize;
            votes[cell] += 1;
            residual[cell] += (rho - bin).abs();
        }
    }

    let mut cells: Vec<(LineHit, f64)> = Vec::new();
    for (ti, &theta) in thetas.iter().enumerate() {
        for ri in 0..n_rho {
            let cell = ti * n_rho + ri;
            if votes[cell] > 0 && votes[cell] >= threshold {
                let hit = LineHit {
                    rho: ri as i32 - rmax as i32,
                    theta,
                    votes: votes[cell],
                };
                cells.push((hit, residual[cell]));
            }
        }
    }
    cells.sort_by(|(a, ra), (b, rb)| {
        by_votes_then_fit((a.votes, *ra), (b.votes, *rb))
            .then(a.theta.cmp(&b.theta))
            .then(a.rho.cmp(&b.rho))
    });
    Ok(cells.into_iter().map(|(hit, _)| hit).collect())
}

pub fn hough_circles(
    edges: &Image,
    r_min: usize,
    r_max: usize,
    threshold: u32,
) -> Result<Vec<CircleHit>> {
    require_gray(edges)?;
    if r_min == 0 || r_min > r_max {
        return Err(VisionError::BadRadiusRange { r_min, r_max });
    }
    let (w, h) = (edges.width(), edges.height());
    let n_r = r_max - r_min + 1;
    let dirs: Vec<(f64, f64)> = (0..360)
        .map(|d| (d as f64).to_radians().sin_cos())
        .collect();

    let plane = w * h;
    let mut votes = vec![0u32; n_r * plane];
    let mut residual = vec![0.0f64; n_r * plane];
    // Marks which cells the current (pixel, radius) already voted for.
    let mut stamp = vec![usize::MAX; plane];
    let mut visit = 0usize;
    for (x, y) in edge_pixels(edges) {
        for ri in 0..n_r {
            let r = (r_min + ri) as f64;
            for &(s, c) in &dirs {
                let cx = (x as f64 - r * c).round();
                let cy = (y as f64 - r * s).round();
                if cx < 0.0 || cy < 0.0 || cx >= w as f64 || cy >= h as f64 {
                    continue;
                }
                let p = cy as usize * w + cx as usize;
                if stamp[p] == visit {
                    continue;
                }
                stamp[p] = visit;
                let dist = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
                votes[ri * plane + p] += 1;
                residual[ri * plane + p] += (dist - r).abs();
            }
            visit += 1;
        }
    }

    let mut cells: Vec<(CircleHit, f64)> = Vec::new();
    for ri in 0..n_r {
        for p in 0..plane {
            let v = votes[ri * plane + p];
            if v > 0 && v >= threshold {
                let hit = CircleHit {
                    cx: p % w,
                    cy: p / w,
                    radius: r_min + ri,
                    votes: v,
                };
                cells.push((hit, residual[ri * plane + p]));
            }
        }
    }
    cells.sort_by(|(a, ra), (b, rb)| {
        by_votes_then_fit((a.votes, *ra), (b.votes, *rb))
            .then(a.radius.cmp(&b.radius))
            .then(a.cy.cmp(&b.cy))
            .then(a.cx.cmp(&b.cx))
    });
    Ok(cells.into_iter().map(|(hit, _)| hit).collect())
}

/// Greedy suppression over sorted line hits: keeps a hit only if it is more
/// than `min_rho` pixels or `min_theta` degrees away from every kept one.
pub fn distinct_lines(hits: &[LineHit], min_rho: i32, min_theta: u32) -> Vec<LineHit> {
    let mut kept: Vec<LineHit> = Vec::new();
    for hit in hits {
        let close = kept.iter().any(|k| {
            let dt = k.theta.abs_diff(hit.theta);
            // Across the 0/180 seam the same line reappears with negated rho.
            let (dt, hit_rho) = if dt > 90 {
                (180 - dt, -hit.rho)
            } else {
                (dt, hit.rho)
            };
            (k.rho - hit_rho).abs() <= min_rho && dt <= min_theta
        });
        if !close {
            kept.push(*hit);
        }
    }
    kept
}

/// Greedy suppression over sorted circle hits by center distance.
pub fn distinct_circles(hits: &[CircleHit], min_center_distance: f64) -> Vec<CircleHit> {
    let mut kept: Vec<CircleHit> = Vec::new();
    for hit in hits {
        let close = kept.iter().any(|k| {
            let dx = k.cx as f64 - hit.cx as f64;
            let dy = k.cy as f64 - hit.cy as f64;
            (dx * dx + dy * dy).sqrt() <= min_center_distance
        });
        if !close {
            kept.push(*hit);
        }
    }
    kept
}
