#![allow(dead_code)]

use std::path::Path;

use wilddistort::distortions::{apply, squish_resize, DistortionKind, Params, SeverityTable};
use wilddistort::image::{io, ImageBuffer};
use wilddistort::metrics::{psnr, Psnr};
use wilddistort::pipeline::{Label, ListingEntry};
use wilddistort::rng::SeededRng;
use wilddistort::synth;

/// Writes `n` synthetic PNGs into `dir/src` plus a listing, alternating labels.
pub fn write_corpus(dir: &Path, n: usize, size: u32, seed: u64) -> Vec<ListingEntry> {
    let src = dir.join("src");
    std::fs::create_dir_all(&src).unwrap();
    let mut entries = Vec::new();
    for i in 0..n {
        let id = format!("img_{i:04}");
        let rel = format!("src/{id}.png");
        io::save_png(&synth::scene(seed + i as u64, size, size), &dir.join(&rel)).unwrap();
        entries.push(ListingEntry {
            image_id: id,
            path: rel,
            label: if i % 2 == 0 { Label::Real } else { Label::Fake },
        });
    }
    let mut csv = String::from("image_id,path,label\n");
    for e in &entries {
        csv.push_str(&format!("{},{},{}\n", e.image_id, e.path, e.label));
    }
    std::fs::write(dir.join("listing.csv"), csv).unwrap();
    entries
}

/// Mean PSNR per level over a fixed corpus; geometric outputs are resized
/// back to the source size before comparison.
pub fn level_psnr(kind: DistortionKind, corpus: &[ImageBuffer], table: &SeverityTable) -> Vec<f64> {
    (1..=table.num_levels())
        .map(|level| {
            let s = table.spec(kind, level).unwrap();
            let total: f64 = corpus
                .iter()
                .enumerate()
                .map(|(i, img)| {
                    let out = apply(img, &s, &SeededRng::new(1000 + i as u64)).unwrap().image;
                    let out = if out.dimensions() == img.dimensions() {
                        out
                    } else {
                        squish_resize(&out, img.width(), img.height())
                    };
                    match psnr(img, &out).unwrap() {
                        Psnr::Identical => 100.0,
                        Psnr::Db(v) => v,
                    }
                })
                .sum();
            total / corpus.len() as f64
        })
        .collect()
}

/// Zero-magnitude parameters per kind with the allowed per-channel deviation.
pub fn zero_magnitude_params() -> Vec<(Params, u8)> {
    vec![
        (Params::WhiteNoise { sigma: 0.0 }, 0),
        (Params::MultiplicativeNoise { sigma: 0.0 }, 0),
        (Params::IsoNoise { sigma: 0.0 }, 1),
        (Params::ImpulseNoise { density: 0.0 }, 0),
        (Params::GaussianBlur { sigma: 0.0 }, 0),
        (Params::LensBlur { radius: 0.0 }, 0),
        (Params::Pixelate { block: 1 }, 0),
        (Params::BrightnessIncrease { delta: 0.0 }, 0),
        (Params::BrightnessDecrease { delta: 0.0 }, 0),
        (Params::LinearContrastChange { factor: 1.0 }, 0),
        (Params::ColorSaturation { factor: 1.0 }, 1),
        (Params::ColorShift { hue_deg: 0.0, shift_deg: None }, 1),
        (Params::ColorJitter { strength: 0.0, factors: None }, 1),
        (Params::ColorQuantization { bins: 256 }, 0),
        (Params::RgbChannelShift { shift: 0, offsets: None }, 0),
        (Params::ColorCast { magnitude: 0.0, tint: None }, 0),
        (Params::RandomToneCurve { strength: 0.0, points: None }, 1),
        (Params::RandomCrop { keep: 1.0, window: None }, 0),
        (Params::RandomAspectCrop { trim: 0.0, axis: None, window: None }, 0),
        (Params::Downscale { factor: 1.0 }, 0),
        (Params::PerspectiveTransform { jitter: 0.0, corners: None }, 1),
    ]
}
