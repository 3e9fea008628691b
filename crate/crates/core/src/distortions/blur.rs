use super::filter::{convolve_separable, convolve_sparse, disk_kernel, gaussian_kernel, motion_kernel};
use super::{join, planes};
use crate::image::ImageBuffer;
use crate::rng::SeededRng;

pub(super) fn gaussian(img: &ImageBuffer, sigma: f64) -> ImageBuffer {
    if sigma <= 0.0 {
        return img.clone();
    }
    let k = gaussian_kernel(sigma);
    join(&planes(img).map(|p| convolve_separable(&p, &k)))
}

pub(super) fn lens(img: &ImageBuffer, radius: f64) -> ImageBuffer {
    let k = disk_kernel(radius);
    if k.len() == 1 {
        return img.clone();
    }
    join(&planes(img).map(|p| convolve_sparse(&p, &k)))
}

pub(super) fn motion(img: &ImageBuffer, length: f64, angle_deg: f64) -> ImageBuffer {
    let k = motion_kernel(length, angle_deg);
    if k.len() == 1 {
        return img.clone();
    }
    join(&planes(img).map(|p| convolve_sparse(&p, &k)))
}

/// Bottom-up raster scan swapping each interior pixel with a random
/// neighbour within `delta`, repeated, followed by a Gaussian blur.
pub(super) fn glass(img: &ImageBuffer, sigma: f64, delta: u32, iterations: u32, rng: &mut SeededRng) -> ImageBuffer {
    let mut out = img.clone();
    let (w, h) = out.dimensions();
    let d = delta as i64;
    if delta > 0 && w > 2 * delta && h > 2 * delta {
        for _ in 0..iterations {
            for y in (delta..h - delta).rev() {
                for x in (delta..w - delta).rev() {
                    let dx = rng.int_inclusive(-d, d);
                    let dy = rng.int_inclusive(-d, d);
                    let (nx, ny) = ((x as i64 + dx) as u32, (y as i64 + dy) as u32);
                    let a = out.pixel(x, y);
                    let b = out.pixel(nx, ny);
                    out.put_pixel(x, y, b);
                    out.put_pixel(nx, ny, a);
                }
            }
        }
    }
    gaussian(&out, sigma)
}

/// Replaces each `block x block` cell (anchored at the origin; edge cells
/// may be partial) by its rounded mean.
pub(super) fn pixelate(img: &ImageBuffer, block: u32) -> ImageBuffer {
    if block <= 1 {
        return img.clone();
    }
    let (w, h) = img.dimensions();
    let mut out = img.clone();
    for by in (0..h).step_by(block as usize) {
        for bx in (0..w).step_by(block as usize) {
            let (x1, y1) = ((bx + block).min(w), (by + block).min(h));
            let mut sum = [0u64; 3];
            for y in by..y1 {
                for x in bx..x1 {
                    let p = img.pixel(x, y);
                    for c in 0..3 {
                        sum[c] += p[c] as u64;
                    }
                }
            }
            let n = ((x1 - bx) * (y1 - by)) as f64;
            let mean = sum.map(|s| crate::image::quantize_255(s as f64 / n));
            for y in by..y1 {
                for x in bx..x1 {
                    out.put_pixel(x, y, mean);
                }
            }
        }
    }
    out
}
