use flybot_core::raster::{histogram, parse_pnm, to_grayscale, write_pnm, Image, RasterError};
use proptest::prelude::*;

fn image_strategy() -> impl Strategy<Value = Image> {
    (1usize..9, 1usize..9, prop::bool::ANY).prop_flat_map(|(w, h, rgb)| {
        let channels = if rgb { 3 } else { 1 };
        prop::collection::vec(any::<u8>(), w * h * channels)
            .prop_map(move |s| Image::new(w, h, channels, s).unwrap())
    })
}

#[test]
fn header_examples() {
    let mut bytes = b"P5 2 1 255\n".to_vec();
    bytes.extend([0, 255]);
    let img = parse_pnm(&bytes).unwrap();
    assert_eq!((img.width(), img.height(), img.channels()), (2, 1, 1));
    assert_eq!(img.samples(), &[0, 255]);

    let mut bytes = b"P6\n1 1\n255\n".to_vec();
    bytes.extend([10, 20, 30]);
    assert_eq!(parse_pnm(&bytes).unwrap().rgb_at(0, 0), [10, 20, 30]);

    assert_eq!(parse_pnm(b"P7 1 1 255\n\0"), Err(RasterError::BadMagic));
    assert_eq!(
        parse_pnm(b"P5 1 1 65535\n\0\0"),
        Err(RasterError::MaxvalUnsupported(65535))
    );
}

#[test]
fn ascii_variant_of_gray() {
    let img = Image::new(3, 1, 1, vec![0, 7, 255]).unwrap();
    let text = write_pnm(&img, true);
    assert!(text.starts_with(b"P2"));
    assert_eq!(parse_pnm(&text).unwrap(), img);
    let rgb = Image::new(1, 1, 3, vec![1, 2, 3]).unwrap();
    assert!(write_pnm(&rgb, true).starts_with(b"P3"));
}

#[test]
fn single_zero_pixel() {
    let img = Image::filled_gray(1, 1, 0).unwrap();
    let bytes = write_pnm(&img, false);
    assert!(bytes.starts_with(b"P5"));
    assert_eq!(bytes.last(), Some(&0));
    assert_eq!(bytes.iter().filter(|&&b| b == 0).count(), 1);
}

#[test]
fn luma_reference_pixels() {
    let img = Image::new(2, 1, 3, vec![255, 255, 255, 255, 0, 0]).unwrap();
    assert_eq!(to_grayscale(&img).samples(), &[255, 76]);
}

proptest! {
    #[test]
    fn codec_round_trip(img in image_strategy(), ascii in prop::bool::ANY) {
        prop_assert_eq!(parse_pnm(&write_pnm(&img, ascii)).unwrap(), img);
    }

    #[test]
    fn grayscale_is_idempotent(img in image_strategy()) {
        let g = to_grayscale(&img);
        prop_assert_eq!(to_grayscale(&g), g.clone());
        prop_assert_eq!(g.channels(), 1);
    }

    #[test]
    fn histogram_conserves_mass(img in image_strategy()) {
        let g = to_grayscale(&img);
        let h = histogram(&g).unwrap();
        prop_assert_eq!(h.total(), (g.width() * g.height()) as u64);
    }

    #[test]
    fn parser_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..64)) {
        let _ = parse_pnm(&bytes);
        let mut framed = b"P5 3 2 255\n".to_vec();
        framed.extend(&bytes);
        if let Ok(img) = parse_pnm(&framed) {
            prop_assert_eq!(img.samples(), &bytes[..6]);
        }
    }
}
