//! Mexican-hat (Ricker) wavelet filtering.

use super::{convolve_reflect, require_gray, ResponseMap, Result, VisionError};
use crate::raster::Image;

/// Unnormalized radial profile `(1 - r²/2σ²) · exp(-r²/2σ²)`; equals 1 at
/// the origin and crosses zero at `r = σ√2`.
pub fn mexican_hat(r: f64, sigma: f64) -> f64 {
    let q = r * r / (2.0 * sigma * sigma);
    (1.0 - q) * (-q).exp()
}

/// Square kernel of side `2·radius + 1`, shifted by its mean so the taps sum
/// to zero and flat regions produce no response.
pub fn mexican_hat_kernel(sigma: f64, radius: usize) -> Result<ResponseMap> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(VisionError::NonPositiveSigma(sigma));
    }
    let side = 2 * radius + 1;
    let c = radius as f64;
    let mut values = Vec::with_capacity(side * side);
    for y in 0..side {
        for x in 0..side {
            let (dx, dy) = (x as f64 - c, y as f64 - c);
            values.push(mexican_hat((dx * dx + dy * dy).sqrt(), sigma));
        }
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter_mut().for_each(|v| *v -= mean);
    Ok(ResponseMap::new(side, side, values))
}

/// Radius used by [`wavelet_response`]: `ceil(4σ)`.
pub fn default_radius(sigma: f64) -> usize {
    (4.0 * sigma).ceil() as usize
}

/// Wavelet coefficient map of a gray image at scale `sigma`.
pub fn wavelet_response(img: &Image, sigma: f64) -> Result<ResponseMap> {
    require_gray(img)?;
    let kernel = mexican_hat_kernel(sigma, default_radius(sigma))?;
    Ok(convolve_reflect(img, &kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_landmarks() {
        assert_eq!(mexican_hat(0.0, 2.0), 1.0);
        assert!(mexican_hat(2.0 * 2f64.sqrt(), 2.0).abs() < 1e-15);
        assert!(mexican_hat(4.0, 2.0) < 0.0);
    }

    #[test]
    fn kernel_sums_to_zero() {
        for sigma in [1.0, 2.0, 3.0] {
            let k = mexican_hat_kernel(sigma, default_radius(sigma)).unwrap();
            assert!(k.sum().abs() < 1e-12, "sigma {sigma}: {}", k.sum());
            assert_eq!(k.width(), 2 * default_radius(sigma) + 1);
        }
    }

    #[test]
    fn rejects_bad_sigma() {
        assert_eq!(
            mexican_hat_kernel(0.0, 3),
            Err(VisionError::NonPositiveSigma(0.0))
        );
        assert!(mexican_hat_kernel(f64::NAN, 3).is_err());
    }

    #[test]
    fn flat_image_has_no_response() {
        let img = Image::filled_gray(13, 9, 200).unwrap();
        let r = wavelet_response(&img, 1.5).unwrap();
        assert!(r.values().iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn rgb_rejected() {
        let img = Image::new(1, 1, 3, vec![0, 0, 0]).unwrap();
        assert_eq!(wavelet_response(&img, 1.0), Err(VisionError::NotGrayscale));
    }
}
