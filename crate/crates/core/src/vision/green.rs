use super::{Result, VisionError};
use crate::raster::Image;

/// Default excess-green cut on the 8-bit scale.
pub const DEFAULT_EXG_THRESHOLD: i32 = 20;

/// Fraction of vegetation pixels plus the binary mask they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenDensity {
    pub fraction: f64,
    /// 255 where `2G - R - B > threshold`, 0 elsewhere.
    pub mask: Image,
}

pub fn green_density(img: &Image, exg_threshold: i32) -> Result<GreenDensity> {
    if img.channels() != 3 {
        return Err(VisionError::NotRgb);
    }
    let mask_samples: Vec<u8> = img
        .samples()
        .chunks_exact(3)
        .map(|p| {
            let exg = 2 * p[1] as i32 - p[0] as i32 - p[2] as i32;
            if exg > exg_threshold {
                255
            } else {
                0
            }
        })
        .collect();
    let green = mask_samples.iter().filter(|&&v| v == 255).count();
    let fraction = green as f64 / img.pixel_count() as f64;
    let mask = Image::new(img.width(), img.height(), 1, mask_samples).expect("same dimensions");
    Ok(GreenDensity { fraction, mask })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_green_and_gray() {
        let g = Image::rgb_from_fn(4, 3, |_, _| [0, 255, 0]).unwrap();
        assert_eq!(
            green_density(&g, DEFAULT_EXG_THRESHOLD).unwrap().fraction,
            1.0
        );
        let grey = Image::rgb_from_fn(4, 3, |_, _| [128, 128, 128]).unwrap();
        let d = green_density(&grey, DEFAULT_EXG_THRESHOLD).unwrap();
        assert_eq!(d.fraction, 0.0);
        assert!(d.mask.samples().iter().all(|&v| v == 0));
    }

    #[test]
    fn half_and_half() {
        let img = Image::rgb_from_fn(
            8,
            5,
            |x, _| if x < 4 { [0, 255, 0] } else { [128, 128, 128] },
        )
        .unwrap();
        let d = green_density(&img, DEFAULT_EXG_THRESHOLD).unwrap();
        assert_eq!(d.fraction, 0.5);
        assert_eq!(d.mask.gray_at(0, 0), 255);
        assert_eq!(d.mask.gray_at(7, 4), 0);
    }

    #[test]
    fn threshold_is_strict() {
        // ExG = 2*70 - 50 - 70 = 20, not above the default cut.
        let img = Image::rgb_from_fn(1, 1, |_, _| [50, 70, 70]).unwrap();
        assert_eq!(green_density(&img, 20).unwrap().fraction, 0.0);
        assert_eq!(green_density(&img, 19).unwrap().fraction, 1.0);
    }

    #[test]
    fn gray_input_rejected() {
        let img = Image::filled_gray(2, 2, 0).unwrap();
        assert_eq!(green_density(&img, 20), Err(VisionError::NotRgb));
    }
}
