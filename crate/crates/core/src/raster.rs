//! 8-bit rasters, the Netpbm (PGM/PPM) codec, grayscale conversion and
//! histograms.
//!
//! Only maxval ≤ 255 is accepted; samples are kept exactly as stored, no
//! rescaling happens on either side of the codec.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RasterError {
    #[error("bad magic number: expected P2, P3, P5 or P6")]
    BadMagic,
    #[error("truncated data: expected {expected} samples, found {found}")]
    TruncatedData { expected: usize, found: usize },
    #[error("maxval {0} unsupported (must be 1..=255)")]
    MaxvalUnsupported(u32),
    #[error("image dimensions must be positive")]
    NonPositiveDimensions,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("sample {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u32, maxval: u32 },
    #[error("image must be single-channel grayscale")]
    NotGrayscale,
    #[error("channel count {0} unsupported (must be 1 or 3)")]
    BadChannelCount(usize),
    #[error("sample buffer holds {found} values, expected {expected}")]
    SampleCountMismatch { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, RasterError>;

/// A row-major, channel-interleaved 8-bit image with 1 or 3 channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(RasterError::NonPositiveDimensions);
        }
        if channels != 1 && channels != 3 {
            return Err(RasterError::BadChannelCount(channels));
        }
        let expected = width * height * channels;
        if samples.len() != expected {
            return Err(RasterError::SampleCountMismatch {
                expected,
                found: samples.len(),
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            samples,
        })
    }

    /// A single-channel image filled with `value`.
    pub fn filled_gray(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, 1, vec![value; width * height])
    }

    /// Builds a gray image by evaluating `f(x, y)` at every pixel.
    pub fn gray_from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self::new(width, height, 1, samples)
    }

    /// Builds an RGB image by evaluating `f(x, y)` at every pixel.
    pub fn rgb_from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [u8; 3],
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                samples.extend_from_slice(&f(x, y));
            }
        }
        Self::new(width, height, 3, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn is_gray(&self) -> bool {
        self.channels == 1
    }

    /// Sample of a gray image at (x, y). Panics when out of bounds.
    pub fn gray_at(&self, x: usize, y: usize) -> u8 {
        debug_assert!(self.is_gray());
        self.samples[y * self.width + x]
    }

    pub fn rgb_at(&self, x: usize, y: usize) -> [u8; 3] {
        debug_assert_eq!(self.channels, 3);
        let i = (y * self.width + x) * 3;
        [self.samples[i], self.samples[i + 1], self.samples[i + 2]]
    }

    pub(crate) fn samples_mut(&mut self) -> &mut [u8] {
        &mut self.samples
    }

    /// Mirror left-right.
    pub fn flip_horizontal(&self) -> Image {
        let mut out = self.samples.clone();
        let c = self.channels;
        for y in 0..self.height {
            for x in 0..self.width {
                let src = (y * self.width + x) * c;
                let dst = (y * self.width + (self.width - 1 - x)) * c;
                out[dst..dst + c].copy_from_slice(&self.samples[src..src + c]);
            }
        }
        Image {
            samples: out,
            ..*self
        }
    }

    /// Mirror top-bottom.
    pub fn flip_vertical(&self) -> Image {
        let row = self.width * self.channels;
        let mut out = Vec::with_capacity(self.samples.len());
        for y in (0..self.height).rev() {
            out.extend_from_slice(&self.samples[y * row..(y + 1) * row]);
        }
        Image {
            samples: out,
            ..*self
        }
    }

    /// Photometric negative, `255 - v` on every sample.
    pub fn inverted(&self) -> Image {
        Image {
            samples: self.samples.iter().map(|v| 255 - v).collect(),
            ..*self
        }
    }
}

/// Counts of each gray level of a single-channel image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    bins: [u64; 256],
}

impl Histogram {
    pub fn from_bins(bins: [u64; 256]) -> Self {
        Self { bins }
    }

    pub fn bins(&self) -> &[u64; 256] {
        &self.bins
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().sum()
    }
}

impl Default for Histogram {
    fn default() -> Self {
        Self { bins: [0; 256] }
    }
}

pub fn histogram(img: &Image) -> Result<Histogram> {
    if !img.is_gray() {
        return Err(RasterError::NotGrayscale);
    }
    let mut bins = [0u64; 256];
    for &v in img.samples() {
        bins[v as usize] += 1;
    }
    Ok(Histogram { bins })
}

/// BT.601 luma with round-half-up. Gray images come back unchanged.
pub fn to_grayscale(img: &Image) -> Image {
    if img.is_gray() {
        return img.clone();
    }
    // Integer weights in thousandths keep the rounding exact.
    let samples = img
        .samples()
        .chunks_exact(3)
        .map(|p| {
            let acc = 299 * p[0] as u32 + 587 * p[1] as u32 + 114 * p[2] as u32;
            ((acc + 500) / 1000) as u8
        })
        .collect();
    Image {
        width: img.width,
        height: img.height,
        channels: 1,
        samples,
    }
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Next unsigned decimal token, or `None` at end of input.
    fn next_uint(&mut self) -> Result<Option<u32>> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            if self.pos >= self.bytes.len() {
                return Ok(None);
            }
            let b = self.bytes[self.pos];
            return Err(RasterError::BadHeader(format!(
                "unexpected byte 0x{b:02x} at offset {}",
                self.pos
            )));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        text.parse::<u32>()
            .map(Some)
            .map_err(|_| RasterError::BadHeader(format!("number too large: {text}")))
    }

    fn require_uint(&mut self, what: &str) -> Result<u32> {
        self.next_uint()?
            .ok_or_else(|| RasterError::BadHeader(format!("missing {what}")))
    }
}

/// Decodes a P2, P3, P5 or P6 file.
pub fn parse_pnm(bytes: &[u8]) -> Result<Image> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(RasterError::BadMagic);
    }
    let (channels, ascii) = match bytes[1] {
        b'2' => (1, true),
        b'3' => (3, true),
        b'5' => (1, false),
        b'6' => (3, false),
        _ => return Err(RasterError::BadMagic),
    };
    if bytes.len() > 2 && !bytes[2].is_ascii_whitespace() && bytes[2] != b'#' {
        return Err(RasterError::BadMagic);
    }
    let mut rd = HeaderReader { bytes, pos: 2 };
    let width = rd.require_uint("width")? as usize;
    let height = rd.require_uint("height")? as usize;
    let maxval = rd.require_uint("maxval")?;
    if width == 0 || height == 0 {
        return Err(RasterError::NonPositiveDimensions);
    }
    if maxval == 0 || maxval > 255 {
        return Err(RasterError::MaxvalUnsupported(maxval));
    }
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or(RasterError::NonPositiveDimensions)?;

    let samples = if ascii {
        let mut samples = Vec::with_capacity(expected);
        while samples.len() < expected {
            match rd.next_uint()? {
                Some(v) if v > maxval => {
                    return Err(RasterError::SampleOutOfRange { value: v, maxval })
                }
                Some(v) => samples.push(v as u8),
                None => {
                    return Err(RasterError::TruncatedData {
                        expected,
                        found: samples.len(),
                    })
                }
            }
        }
        samples
    } else {
        // Exactly one whitespace byte separates maxval from the raster.
        let start = rd.pos + 1;
        if start > bytes.len() {
            return Err(RasterError::TruncatedData { expected, found: 0 });
        }
        let data = &bytes[start..];
        if data.len() < expected {
            return Err(RasterError::TruncatedData {
                expected,
                found: data.len(),
            });
        }
        let data = &data[..expected];
        if let Some(&v) = data.iter().find(|&&v| v as u32 > maxval) {
            return Err(RasterError::SampleOutOfRange {
                value: v as u32,
                maxval,
            });
        }
        data.to_vec()
    };
    Image::new(width, height, channels, samples)
}

/// Encodes with maxval 255; `ascii` selects P2/P3 over P5/P6.
pub fn write_pnm(img: &Image, ascii: bool) -> Vec<u8> {
    let magic = match (img.channels, ascii) {
        (1, true) => "P2",
        (1, false) => "P5",
        (_, true) => "P3",
        (_, false) => "P6",
    };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width, img.height).into_bytes();
    if ascii {
        let row_len = img.width * img.channels;
        for row in img.samples.chunks(row_len) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.extend_from_slice(line.join(" ").as_bytes());
            out.push(b'\n');
        }
    } else {
        out.extend_from_slice(&img.samples);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_binary_gray() {
        let mut bytes = b"P5 2 1 255\n".to_vec();
        bytes.extend_from_slice(&[0, 255]);
        let img = parse_pnm(&bytes).unwrap();
        assert_eq!((img.width(), img.height(), img.channels()), (2, 1, 1));
        assert_eq!(img.samples(), &[0, 255]);
    }

    #[test]
    fn parses_binary_rgb() {
        let mut bytes = b"P6 1 1 255\n".to_vec();
        bytes.extend_from_slice(&[10, 20, 30]);
        let img = parse_pnm(&bytes).unwrap();
        assert_eq!(img.channels(), 3);
        assert_eq!(img.samples(), &[10, 20, 30]);
    }

    #[test]
    fn rejects_unknown_magic() {
        assert_eq!(parse_pnm(b"P7 1 1 255\n\0"), Err(RasterError::BadMagic));
        assert_eq!(parse_pnm(b"GIF89a"), Err(RasterError::BadMagic));
        assert_eq!(parse_pnm(b""), Err(RasterError::BadMagic));
    }

    #[test]
    fn rejects_16_bit() {
        assert_eq!(
            parse_pnm(b"P5 1 1 65535\n\0\0"),
            Err(RasterError::MaxvalUnsupported(65535))
        );
    }

    #[test]
    fn rejects_zero_dimensions() {
        assert_eq!(
            parse_pnm(b"P2 0 3 255\n"),
            Err(RasterError::NonPositiveDimensions)
        );
    }

    #[test]
    fn reports_truncation() {
        assert_eq!(
            parse_pnm(b"P5 2 2 255\n\x01\x02"),
            Err(RasterError::TruncatedData {
                expected: 4,
                found: 2
            })
        );
        assert_eq!(
            parse_pnm(b"P2 2 2 255\n1 2 3"),
            Err(RasterError::TruncatedData {
                expected: 4,
                found: 3
            })
        );
    }

    #[test]
    fn comments_are_discarded() {
        let img = parse_pnm(b"P2\n# made by hand\n2 # width\n1\n# max\n255\n7 9\n").unwrap();
        assert_eq!(img.samples(), &[7, 9]);
    }

    #[test]
    fn low_maxval_keeps_samples_verbatim() {
        let img = parse_pnm(b"P2 3 1 15\n0 7 15\n").unwrap();
        assert_eq!(img.samples(), &[0, 7, 15]);
        assert!(matches!(
            parse_pnm(b"P2 1 1 15\n16\n"),
            Err(RasterError::SampleOutOfRange {
                value: 16,
                maxval: 15
            })
        ));
    }

    #[test]
    fn writes_minimal_binary_gray() {
        let img = Image::filled_gray(1, 1, 0).unwrap();
        assert_eq!(write_pnm(&img, false), b"P5\n1 1\n255\n\0".to_vec());
    }

    #[test]
    fn ascii_gray_uses_p2() {
        let img = Image::new(2, 1, 1, vec![3, 250]).unwrap();
        let bytes = write_pnm(&img, true);
        assert!(bytes.starts_with(b"P2"));
        assert_eq!(parse_pnm(&bytes).unwrap(), img);
    }

    #[test]
    fn luma_conversion() {
        let img = Image::new(3, 1, 3, vec![255, 255, 255, 255, 0, 0, 0, 0, 0]).unwrap();
        let g = to_grayscale(&img);
        assert_eq!(g.samples(), &[255, 76, 0]);
        let gray = Image::new(2, 1, 1, vec![5, 6]).unwrap();
        assert_eq!(to_grayscale(&gray), gray);
    }

    #[test]
    fn histogram_counts() {
        let img = Image::new(2, 1, 1, vec![0, 255]).unwrap();
        let h = histogram(&img).unwrap();
        assert_eq!(h.bins()[0], 1);
        assert_eq!(h.bins()[255], 1);
        assert_eq!(h.total(), 2);

        let flat = Image::filled_gray(3, 3, 7).unwrap();
        assert_eq!(histogram(&flat).unwrap().bins()[7], 9);

        let rgb = Image::new(1, 1, 3, vec![1, 2, 3]).unwrap();
        assert_eq!(histogram(&rgb), Err(RasterError::NotGrayscale));
    }

    #[test]
    fn constructor_checks_invariants() {
        assert_eq!(
            Image::new(2, 2, 2, vec![0; 8]),
            Err(RasterError::BadChannelCount(2))
        );
        assert!(matches!(
            Image::new(2, 2, 1, vec![0; 3]),
            Err(RasterError::SampleCountMismatch { .. })
        ));
    }

    #[test]
    fn flips_and_inversion() {
        let img = Image::new(3, 2, 1, vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(img.flip_horizontal().samples(), &[3, 2, 1, 6, 5, 4]);
        assert_eq!(img.flip_vertical().samples(), &[4, 5, 6, 1, 2, 3]);
        assert_eq!(img.inverted().samples(), &[254, 253, 252, 251, 250, 249]);
    }
}
