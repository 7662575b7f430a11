//! Principal component analysis with a cyclic Jacobi eigensolver.

use super::{Result, VisionError};

#[derive(Debug, Clone, PartialEq)]
pub struct Pca {
    pub mean: Vec<f64>,
    /// Unit-norm principal axes, strongest first.
    pub components: Vec<Vec<f64>>,
    /// Covariance eigenvalues matching `components`.
    pub eigenvalues: Vec<f64>,
    /// Centered inputs expressed in the component basis, one row per input.
    pub projected: Vec<Vec<f64>>,
}

impl Pca {
    /// Maps projected coordinates back to centered data space.
    pub fn reconstruct_centered(&self, coords: &[f64]) -> Vec<f64> {
        let dim = self.mean.len();
        let mut out = vec![0.0; dim];
        for (c, comp) in coords.iter().zip(&self.components) {
            for (o, v) in out.iter_mut().zip(comp) {
                *o += c * v;
            }
        }
        out
    }
}

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric matrix (row-major, `n × n`).
/// Returns eigenvalues and the eigenvectors as columns of `v`.
pub(crate) fn jacobi_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

/// Top-`k` principal components of `vectors` (one observation per row).
pub fn pca_project(vectors: &[Vec<f64>], k: usize) -> Result<Pca> {
    if vectors.len() < 2 {
        return Err(VisionError::TooFewVectors);
    }
    let dim = vectors[0].len();
    if dim == 0 || vectors.iter().any(|v| v.len() != dim) {
        return Err(VisionError::DimensionMismatch);
    }
    if k == 0 || k > dim {
        return Err(VisionError::BadComponentCount { k, dim });
    }
    let m = vectors.len() as f64;
    let mean: Vec<f64> = (0..dim)
        .map(|j| vectors.iter().map(|v| v[j]).sum::<f64>() / m)
        .collect();
    let centered: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| v.iter().zip(&mean).map(|(x, mu)| x - mu).collect())
        .collect();

    let mut cov = vec![0.0; dim * dim];
    for row in &centered {
        for i in 0..dim {
            for j in i..dim {
                cov[i * dim + j] += row[i] * row[j];
            }
        }
    }
    for i in 0..dim {
        for j in i..dim {
            let c = cov[i * dim + j] / (m - 1.0);
            cov[i * dim + j] = c;
            cov[j * dim + i] = c;
        }
    }
    if cov.iter().all(|&c| c == 0.0) {
        return Err(VisionError::ZeroVariance);
    }

    let (vals, vecs) = jacobi_eigen(&cov, dim);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    let components: Vec<Vec<f64>> = order[..k]
        .iter()
        .map(|&c| {
            let mut col: Vec<f64> = (0..dim).map(|r| vecs[r * dim + c]).collect();
            let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
            col.iter_mut().for_each(|x| *x /= norm);
            // Sign convention: largest-magnitude entry positive.
            let pivot = col
                .iter()
                .copied()
                .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
            if pivot < 0.0 {
                col.iter_mut().for_each(|x| *x = -*x);
            }
            col
        })
        .collect();
    let eigenvalues = order[..k].iter().map(|&c| vals[c]).collect();
    let projected = centered
        .iter()
        .map(|row| {
            components
                .iter()
                .map(|comp| comp.iter().zip(row).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    Ok(Pca {
        mean,
        components,
        eigenvalues,
        projected,
    })
}
