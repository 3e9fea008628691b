use super::filter::reflect101;
use super::map_unit;
use crate::image::{hsv_to_rgb, rgb_to_hsv, ImageBuffer};

pub(super) fn hue_shift(img: &ImageBuffer, shift_deg: f64) -> ImageBuffer {
    if shift_deg == 0.0 {
        return img.clone();
    }
    map_unit(img, |px| {
        let [h, s, v] = rgb_to_hsv(px);
        hsv_to_rgb([h + shift_deg, s, v])
    })
}

pub(super) fn saturation(img: &ImageBuffer, factor: f64) -> ImageBuffer {
    map_unit(img, |px| {
        let [h, s, v] = rgb_to_hsv(px);
        hsv_to_rgb([h, (s * factor).clamp(0.0, 1.0), v])
    })
}

#[inline]
fn luma(px: [f64; 3]) -> f64 {
    0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]
}

/// Brightness (scale), contrast (about the image's mean luma) and
/// saturation (blend with per-pixel luma), in that order.
pub(super) fn jitter(img: &ImageBuffer, factors: [f64; 3]) -> ImageBuffer {
    let [fb, fc, fs] = factors;
    let n = img.pixel_count() as f64;
    let mean = img
        .pixels()
        .map(|p| luma(p.map(|v| v as f64 / 255.0)) * fb)
        .sum::<f64>()
        / n;
    map_unit(img, |px| {
        let px = px.map(|v| (v * fb).clamp(0.0, 1.0));
        let px = px.map(|v| ((v - mean) * fc + mean).clamp(0.0, 1.0));
        let gray = luma(px);
        px.map(|v| gray + (v - gray) * fs)
    })
}

/// `bin = floor(v * bins / 256)`, output `round(bin * 255 / (bins - 1))`.
pub fn quantize_sample(v: u8, bins: u32) -> u8 {
    let bin = v as u32 * bins / 256;
    crate::image::quantize_255(bin as f64 * 255.0 / (bins - 1) as f64)
}

pub(super) fn quantize(img: &ImageBuffer, bins: u32) -> ImageBuffer {
    let lut: Vec<u8> = (0..=255u8).map(|v| quantize_sample(v, bins)).collect();
    img.map_pixels(|px| px.map(|v| lut[v as usize]))
}

/// Red read from `(x - red_dx, y - red_dy)`, blue likewise; green fixed.
pub(super) fn channel_shift(img: &ImageBuffer, offsets: [i32; 4]) -> ImageBuffer {
    let (w, h) = img.dimensions();
    let [rdx, rdy, bdx, bdy] = offsets;
    ImageBuffer::from_fn(w, h, |x, y| {
        let at = |dx: i32, dy: i32| {
            img.pixel(
                reflect101(x as isize - dx as isize, w as usize) as u32,
                reflect101(y as isize - dy as isize, h as usize) as u32,
            )
        };
        [at(rdx, rdy)[0], img.pixel(x, y)[1], at(bdx, bdy)[2]]
    })
}

pub(super) fn cast(img: &ImageBuffer, tint: [f64; 3]) -> ImageBuffer {
    map_unit(img, |px| [px[0] + tint[0], px[1] + tint[1], px[2] + tint[2]])
}

pub(super) fn offset(img: &ImageBuffer, delta: f64) -> ImageBuffer {
    map_unit(img, |px| px.map(|v| v + delta))
}

pub(super) fn contrast(img: &ImageBuffer, factor: f64) -> ImageBuffer {
    map_unit(img, |px| px.map(|v| (v - 0.5) * factor + 0.5))
}

/// Piecewise-linear tone curve through the fixed endpoints and three knots.
pub fn tone_curve_value(x: f64, points: [f64; 3]) -> f64 {
    let xs = [0.0, 0.25, 0.5, 0.75, 1.0];
    let ys = [0.0, points[0], points[1], points[2], 1.0];
    let x = x.clamp(0.0, 1.0);
    let seg = ((x * 4.0).floor() as usize).min(3);
    let t = (x - xs[seg]) / 0.25;
    ys[seg] + t * (ys[seg + 1] - ys[seg])
}

pub(super) fn tone_curve(img: &ImageBuffer, points: [f64; 3]) -> ImageBuffer {
    let lut: Vec<u8> = (0..=255u32)
        .map(|v| crate::image::quantize_unit(tone_curve_value(v as f64 / 255.0, points)))
        .collect();
    img.map_pixels(|px| px.map(|v| lut[v as usize]))
}
