use super::map_unit;
use crate::image::{rgb_to_ycbcr, ycbcr_to_rgb, ImageBuffer};
use crate::rng::SeededRng;

// Draws are consumed in raster order, channel-interleaved, so streams are
// reproducible regardless of how the work is split elsewhere.

pub(super) fn white(img: &ImageBuffer, sigma: f64, rng: &mut SeededRng) -> ImageBuffer {
    map_unit(img, |px| px.map(|v| v + sigma * rng.standard_normal()))
}

pub(super) fn multiplicative(img: &ImageBuffer, sigma: f64, rng: &mut SeededRng) -> ImageBuffer {
    map_unit(img, |px| px.map(|v| v + v * sigma * rng.standard_normal()))
}

pub(super) fn shot(img: &ImageBuffer, photons: f64, rng: &mut SeededRng) -> ImageBuffer {
    map_unit(img, |px| px.map(|v| rng.poisson(v * photons) / photons))
}

pub(super) fn iso(img: &ImageBuffer, sigma: f64, rng: &mut SeededRng) -> ImageBuffer {
    map_unit(img, |px| {
        let [y, cb, cr] = rgb_to_ycbcr(px);
        let y = y + sigma * rng.standard_normal();
        let cb = cb + 0.5 * sigma * rng.standard_normal();
        let cr = cr + 0.5 * sigma * rng.standard_normal();
        ycbcr_to_rgb([y, cb, cr])
    })
}

/// Number of pixels salted or peppered at `density`.
pub fn impulse_count(pixels: usize, density: f64) -> usize {
    ((density * pixels as f64).floor() as usize).min(pixels)
}

/// Picks exactly `floor(density * N)` distinct pixels by a partial
/// Fisher-Yates shuffle and sets each to black or white.
pub(super) fn impulse(img: &ImageBuffer, density: f64, rng: &mut SeededRng) -> ImageBuffer {
    let n = img.pixel_count();
    let k = impulse_count(n, density);
    let mut out = img.clone();
    if k == 0 {
        return out;
    }
    let mut idx: Vec<u32> = (0..n as u32).collect();
    let w = img.width();
    for i in 0..k {
        let j = i + rng.below((n - i) as u64) as usize;
        idx.swap(i, j);
        let p = idx[i];
        let v = if rng.coin() { 255 } else { 0 };
        out.put_pixel(p % w, p / w, [v; 3]);
    }
    out
}
