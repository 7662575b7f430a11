use super::ResponseMap;
use crate::raster::Image;

/// Maps any integer coordinate into `0..n` by mirroring about the border
/// pixels (`dcb|abcd|cba`), repeating as often as needed.
pub(crate) fn reflect_index(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let m = i.rem_euclid(period);
    if m < n as isize {
        m as usize
    } else {
        (period - m) as usize
    }
}

/// True 2-D convolution of a gray image with an odd-sized kernel, mirror
/// padded at the borders. The kernel's center sits at `(w/2, h/2)`.
pub fn convolve_reflect(img: &Image, kernel: &ResponseMap) -> ResponseMap {
    assert!(img.is_gray(), "convolution needs a gray image");
    assert!(
        kernel.width() % 2 == 1 && kernel.height() % 2 == 1,
        "kernel sides must be odd"
    );
    let (w, h) = (img.width(), img.height());
    let (kw, kh) = (kernel.width(), kernel.height());
    let (rx, ry) = ((kw / 2) as isize, (kh / 2) as isize);
    let src: Vec<f64> = img.samples().iter().map(|&v| v as f64).collect();
    let kv = kernel.values();

    // Precomputed mirrored source columns/rows for every kernel offset.
    let col_lut: Vec<Vec<usize>> = (0..w as isize)
        .map(|x| {
            (0..kw as isize)
                .map(|i| reflect_index(x + rx - i, w))
                .collect()
        })
        .collect();

    let mut out = vec![0.0; w * h];
    for y in 0..h as isize {
        let rows: Vec<usize> = (0..kh as isize)
            .map(|j| reflect_index(y + ry - j, h))
            .collect();
        for x in 0..w {
            let cols = &col_lut[x];
            let mut acc = 0.0;
            for (j, &sy) in rows.iter().enumerate() {
                let krow = &kv[j * kw..(j + 1) * kw];
                let srow = &src[sy * w..(sy + 1) * w];
                for (k, &sx) in krow.iter().zip(cols) {
                    acc += k * srow[sx];
                }
            }
            out[y as usize * w + x] = acc;
        }
    }
    ResponseMap::new(w, h, out)
}
