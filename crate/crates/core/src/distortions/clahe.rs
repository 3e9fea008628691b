//! Contrast-limited adaptive histogram equalisation on luma.
//!
//! Tiles split each axis into `tiles` near-equal spans. Per tile, the 256-bin
//! histogram is clipped at `max(1, floor(clip_limit * area / 256))`, the
//! excess is spread evenly (remainder on evenly spaced bins) and the CDF
//! becomes the tile's mapping. Pixels blend the four nearest tile mappings
//! bilinearly by tile centre.

use super::map_unit;
use crate::image::{quantize_255, quantize_unit, rgb_to_ycbcr, ycbcr_to_rgb, ImageBuffer};

/// Half-open spans `[start, end)` splitting `len` into `min(tiles, len)` parts.
pub fn tile_bounds(len: u32, tiles: u32) -> Vec<(u32, u32)> {
    let n = tiles.clamp(1, len) as u64;
    (0..n)
        .map(|i| {
            let start = (i * len as u64 / n) as u32;
            let end = ((i + 1) * len as u64 / n) as u32;
            (start, end)
        })
        .collect()
}

pub fn clip_count(clip_limit: f64, area: u32) -> u32 {
    ((clip_limit * area as f64 / 256.0).floor() as u32).max(1)
}

/// Caps every bin at `limit`; returns the number of clipped samples.
pub fn clip_histogram(hist: &mut [u32; 256], limit: u32) -> u32 {
    let mut excess = 0;
    for bin in hist.iter_mut() {
        if *bin > limit {
            excess += *bin - limit;
            *bin = limit;
        }
    }
    excess
}

pub fn redistribute_excess(hist: &mut [u32; 256], excess: u32) {
    let batch = excess / 256;
    let mut residual = excess - batch * 256;
    hist.iter_mut().for_each(|b| *b += batch);
    if residual > 0 {
        let step = (256 / residual).max(1) as usize;
        let mut i = 0;
        while residual > 0 && i < 256 {
            hist[i] += 1;
            residual -= 1;
            i += step;
        }
    }
}

fn tile_lut(luma: &[u8], width: u32, xs: (u32, u32), ys: (u32, u32), clip_limit: f64) -> [u8; 256] {
    let mut hist = [0u32; 256];
    for y in ys.0..ys.1 {
        let row = &luma[(y * width) as usize..((y + 1) * width) as usize];
        for &v in &row[xs.0 as usize..xs.1 as usize] {
            hist[v as usize] += 1;
        }
    }
    let area = (xs.1 - xs.0) * (ys.1 - ys.0);
    let excess = clip_histogram(&mut hist, clip_count(clip_limit, area));
    redistribute_excess(&mut hist, excess);
    let scale = 255.0 / area as f64;
    let mut lut = [0u8; 256];
    let mut cdf = 0u32;
    for (v, &count) in hist.iter().enumerate() {
        cdf += count;
        lut[v] = quantize_255(cdf as f64 * scale);
    }
    lut
}

/// Index pair and blend weight for a coordinate between tile centres.
fn neighbours(pos: u32, centres: &[f64]) -> (usize, usize, f64) {
    let p = pos as f64;
    let last = centres.len() - 1;
    if p <= centres[0] {
        return (0, 0, 0.0);
    }
    if p >= centres[last] {
        return (last, last, 0.0);
    }
    let i = centres.partition_point(|&c| c <= p) - 1;
    let t = (p - centres[i]) / (centres[i + 1] - centres[i]);
    (i, i + 1, t)
}

pub fn clahe_luma(luma: &[u8], width: u32, height: u32, clip_limit: f64, tiles: u32) -> Vec<u8> {
    let xb = tile_bounds(width, tiles);
    let yb = tile_bounds(height, tiles);
    let luts: Vec<Vec<[u8; 256]>> = yb
        .iter()
        .map(|&ys| xb.iter().map(|&xs| tile_lut(luma, width, xs, ys, clip_limit)).collect())
        .collect();
    let centre = |b: &(u32, u32)| (b.0 + b.1 - 1) as f64 / 2.0;
    let cx: Vec<f64> = xb.iter().map(centre).collect();
    let cy: Vec<f64> = yb.iter().map(centre).collect();
    let mut out = Vec::with_capacity(luma.len());
    for y in 0..height {
        let (y0, y1, ty) = neighbours(y, &cy);
        for x in 0..width {
            let (x0, x1, tx) = neighbours(x, &cx);
            let v = luma[(y * width + x) as usize] as usize;
            let top = luts[y0][x0][v] as f64 * (1.0 - tx) + luts[y0][x1][v] as f64 * tx;
            let bottom = luts[y1][x0][v] as f64 * (1.0 - tx) + luts[y1][x1][v] as f64 * tx;
            out.push(quantize_255(top * (1.0 - ty) + bottom * ty));
        }
    }
    out
}

pub(super) fn clahe_rgb(img: &ImageBuffer, clip_limit: f64, tiles: u32) -> ImageBuffer {
    let luma: Vec<u8> = img
        .pixels()
        .map(|p| quantize_unit(rgb_to_ycbcr(p.map(|v| v as f64 / 255.0))[0]))
        .collect();
    let mapped = clahe_luma(&luma, img.width(), img.height(), clip_limit, tiles);
    let mut i = 0;
    map_unit(img, |px| {
        let [_, cb, cr] = rgb_to_ycbcr(px);
        let y = mapped[i] as f64 / 255.0;
        i += 1;
        ycbcr_to_rgb([y, cb, cr])
    })
}
