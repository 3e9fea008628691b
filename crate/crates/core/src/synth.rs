//! Deterministic synthetic scenes for demos and tests: smooth gradients,
//! overlapping shapes, band-limited texture and mild sensor-like noise.

use crate::image::{quantize_255, ImageBuffer};
use crate::rng::SeededRng;

struct Blob {
    cx: f64,
    cy: f64,
    rx: f64,
    ry: f64,
    color: [f64; 3],
    soft: f64,
}

struct Wave {
    fx: f64,
    fy: f64,
    phase: f64,
    amp: [f64; 3],
}

/// A `width x height` scene fully determined by `seed`.
pub fn scene(seed: u64, width: u32, height: u32) -> ImageBuffer {
    let mut rng = SeededRng::new(seed).derive_str("synth.scene");
    let color = |rng: &mut SeededRng| [0, 1, 2].map(|_| 30.0 + 195.0 * rng.uniform());
    let top = color(&mut rng);
    let bottom = color(&mut rng);
    let (w, h) = (width as f64, height as f64);
    let blobs: Vec<Blob> = (0..4 + rng.below(5))
        .map(|_| Blob {
            cx: w * rng.uniform(),
            cy: h * rng.uniform(),
            rx: w * (0.08 + 0.3 * rng.uniform()),
            ry: h * (0.08 + 0.3 * rng.uniform()),
            color: color(&mut rng),
            soft: 0.02 + 0.3 * rng.uniform(),
        })
        .collect();
    let waves: Vec<Wave> = (0..6)
        .map(|i| {
            let freq = 0.01 * (1 << i) as f64 * (0.7 + 0.6 * rng.uniform());
            let angle = std::f64::consts::TAU * rng.uniform();
            let amp = 14.0 / (1.0 + i as f64);
            Wave {
                fx: freq * libm::cos(angle),
                fy: freq * libm::sin(angle),
                phase: std::f64::consts::TAU * rng.uniform(),
                amp: [0, 1, 2].map(|_| amp * (0.5 + rng.uniform())),
            }
        })
        .collect();
    let mut noise = rng.derive(1);
    ImageBuffer::from_fn(width, height, |x, y| {
        let (fx, fy) = (x as f64 + 0.5, y as f64 + 0.5);
        let t = fy / h;
        let mut px = [0, 1, 2].map(|c| top[c] * (1.0 - t) + bottom[c] * t);
        for b in &blobs {
            let d = ((fx - b.cx) / b.rx).powi(2) + ((fy - b.cy) / b.ry).powi(2);
            let alpha = ((1.0 - d.sqrt()) / b.soft).clamp(0.0, 1.0);
            for c in 0..3 {
                px[c] += alpha * (b.color[c] - px[c]);
            }
        }
        for wv in &waves {
            let s = libm::sin(wv.fx * fx + wv.fy * fy + wv.phase);
            for c in 0..3 {
                px[c] += wv.amp[c] * s;
            }
        }
        let grain = 2.0 * noise.standard_normal();
        px.map(|v| quantize_255(v + grain))
    })
}

/// `count` scenes with seeds `base_seed, base_seed + 1, ...`.
pub fn corpus(base_seed: u64, count: usize, width: u32, height: u32) -> Vec<ImageBuffer> {
    (0..count as u64)
        .map(|i| scene(base_seed.wrapping_add(i), width, height))
        .collect()
}
