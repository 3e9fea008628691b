//! Per-kind parameter records.
//!
//! Fields wrapped in `Option` are drawn from the per-application random
//! stream the first time a spec is applied and then recorded, so a replayed
//! spec carries everything needed to reproduce the output. Severity tables
//! only ever hold the unresolved form.

use serde::{Deserialize, Serialize};

use super::{DistortionError, DistortionKind};

/// Pixel-aligned crop rectangle recorded by the crop kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CropWindow {
    pub x: u32,
    pub y: u32,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CropAxis {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Params {
    GaussianBlur {
        sigma: f64,
    },
    /// Uniform disk kernel.
    LensBlur {
        radius: f64,
    },
    MotionBlur {
        length: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        angle_deg: Option<f64>,
    },
    /// Local pixel swaps within `delta`, repeated `iterations` times, then a Gaussian blur.
    GlassBlur {
        sigma: f64,
        delta: u32,
        iterations: u32,
    },
    Pixelate {
        block: u32,
    },
    /// Additive Gaussian noise, sigma in unit-range intensity.
    WhiteNoise {
        sigma: f64,
    },
    /// Salt-and-pepper on exactly `floor(density * pixels)` pixels.
    ImpulseNoise {
        density: f64,
    },
    /// Speckle: `x + x * n`, `n ~ N(0, sigma)`.
    MultiplicativeNoise {
        sigma: f64,
    },
    /// Poisson photon noise; fewer photons is noisier.
    ShotNoise {
        photons: f64,
    },
    /// Luma noise `sigma` plus chroma noise `sigma / 2` in YCbCr.
    IsoNoise {
        sigma: f64,
    },
    /// Hue rotation by `hue_deg`, sign drawn per application.
    ColorShift {
        hue_deg: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shift_deg: Option<f64>,
    },
    /// HSV saturation scale.
    ColorSaturation {
        factor: f64,
    },
    /// Brightness, contrast and saturation factors each in `1 +- strength`.
    ColorJitter {
        strength: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        factors: Option<[f64; 3]>,
    },
    ColorQuantization {
        bins: u32,
    },
    /// Red and blue planes displaced by `shift` pixels in drawn directions.
    RgbChannelShift {
        shift: u32,
        /// `[red_dx, red_dy, blue_dx, blue_dy]`
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offsets: Option<[i32; 4]>,
    },
    /// Additive per-channel tint of Euclidean norm `magnitude`.
    ColorCast {
        magnitude: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tint: Option<[f64; 3]>,
    },
    /// Additive offset in 8-bit units.
    BrightnessIncrease {
        delta: f64,
    },
    BrightnessDecrease {
        delta: f64,
    },
    /// `(x - 0.5) * factor + 0.5`
    LinearContrastChange {
        factor: f64,
    },
    /// Piecewise-linear curve through (0,0), (.25,y1), (.5,y2), (.75,y3), (1,1).
    RandomToneCurve {
        strength: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<[f64; 3]>,
    },
    Clahe {
        clip_limit: f64,
        tiles: u32,
    },
    JpegCompression {
        quality: u8,
    },
    MultipleJpegCompressions {
        qualities: Vec<u8>,
    },
    /// Keeps `round(keep * side)` along both axes.
    RandomCrop {
        keep: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<CropWindow>,
    },
    /// Trims `round(trim * side)` along one drawn axis.
    RandomAspectCrop {
        trim: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        axis: Option<CropAxis>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<CropWindow>,
    },
    /// Area-averaged resize to `round(factor * side)`.
    Downscale {
        factor: f64,
    },
    /// Corners pulled inwards by up to `jitter * min(width, height)`.
    PerspectiveTransform {
        jitter: f64,
        /// Source-corner displacements in pixels, TL, TR, BR, BL as (dx, dy) pairs.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        corners: Option<[f64; 8]>,
    },
    /// Bilinear resize to a fixed size, ignoring aspect ratio.
    SquishResize {
        width: u32,
        height: u32,
    },
}

impl Params {
    pub fn kind(&self) -> DistortionKind {
        use DistortionKind as K;
        match self {
            Params::GaussianBlur { .. } => K::GaussianBlur,
            Params::LensBlur { .. } => K::LensBlur,
            Params::MotionBlur { .. } => K::MotionBlur,
            Params::GlassBlur { .. } => K::GlassBlur,
            Params::Pixelate { .. } => K::Pixelate,
            Params::WhiteNoise { .. } => K::WhiteNoise,
            Params::ImpulseNoise { .. } => K::ImpulseNoise,
            Params::MultiplicativeNoise { .. } => K::MultiplicativeNoise,
            Params::ShotNoise { .. } => K::ShotNoise,
            Params::IsoNoise { .. } => K::IsoNoise,
            Params::ColorShift { .. } => K::ColorShift,
            Params::ColorSaturation { .. } => K::ColorSaturation,
            Params::ColorJitter { .. } => K::ColorJitter,
            Params::ColorQuantization { .. } => K::ColorQuantization,
            Params::RgbChannelShift { .. } => K::RgbChannelShift,
            Params::ColorCast { .. } => K::ColorCast,
            Params::BrightnessIncrease { .. } => K::BrightnessIncrease,
            Params::BrightnessDecrease { .. } => K::BrightnessDecrease,
            Params::LinearContrastChange { .. } => K::LinearContrastChange,
            Params::RandomToneCurve { .. } => K::RandomToneCurve,
            Params::Clahe { .. } => K::Clahe,
            Params::JpegCompression { .. } => K::JpegCompression,
            Params::MultipleJpegCompressions { .. } => K::MultipleJpegCompressions,
            Params::RandomCrop { .. } => K::RandomCrop,
            Params::RandomAspectCrop { .. } => K::RandomAspectCrop,
            Params::Downscale { .. } => K::Downscale,
            Params::PerspectiveTransform { .. } => K::PerspectiveTransform,
            Params::SquishResize { .. } => K::SquishResize,
        }
    }

    /// Copy with every per-application draw cleared.
    pub fn base(&self) -> Params {
        let mut p = self.clone();
        match &mut p {
            Params::MotionBlur { angle_deg, .. } => *angle_deg = None,
            Params::ColorShift { shift_deg, .. } => *shift_deg = None,
            Params::ColorJitter { factors, .. } => *factors = None,
            Params::RgbChannelShift { offsets, .. } => *offsets = None,
            Params::ColorCast { tint, .. } => *tint = None,
            Params::RandomToneCurve { points, .. } => *points = None,
            Params::RandomCrop { window, .. } => *window = None,
            Params::RandomAspectCrop { axis, window, .. } => {
                *axis = None;
                *window = None;
            }
            Params::PerspectiveTransform { corners, .. } => *corners = None,
            _ => {}
        }
        p
    }

    pub fn is_resolved(&self) -> bool {
        match self {
            Params::MotionBlur { angle_deg, .. } => angle_deg.is_some(),
            Params::ColorShift { shift_deg, .. } => shift_deg.is_some(),
            Params::ColorJitter { factors, .. } => factors.is_some(),
            Params::RgbChannelShift { offsets, .. } => offsets.is_some(),
            Params::ColorCast { tint, .. } => tint.is_some(),
            Params::RandomToneCurve { points, .. } => points.is_some(),
            Params::RandomCrop { window, .. } => window.is_some(),
            Params::RandomAspectCrop { axis, window, .. } => axis.is_some() && window.is_some(),
            Params::PerspectiveTransform { corners, .. } => corners.is_some(),
            _ => true,
        }
    }

    /// Scalar that grows with perceptual severity; used to check table ordering.
    pub fn magnitude(&self) -> f64 {
        match self {
            Params::GaussianBlur { sigma } => *sigma,
            Params::LensBlur { radius } => *radius,
            Params::MotionBlur { length, .. } => *length,
            Params::GlassBlur {
                sigma,
                delta,
                iterations,
            } => sigma + (*delta as f64) * (*iterations as f64),
            Params::Pixelate { block } => *block as f64,
            Params::WhiteNoise { sigma }
            | Params::MultiplicativeNoise { sigma }
            | Params::IsoNoise { sigma } => *sigma,
            Params::ImpulseNoise { density } => *density,
            Params::ShotNoise { photons } => 1.0 / photons,
            Params::ColorShift { hue_deg, .. } => *hue_deg,
            Params::ColorSaturation { factor } | Params::LinearContrastChange { factor } => {
                (1.0 - factor).abs()
            }
            Params::ColorJitter { strength, .. } => *strength,
            Params::ColorQuantization { bins } => -(*bins as f64),
            Params::RgbChannelShift { shift, .. } => *shift as f64,
            Params::ColorCast { magnitude, .. } => *magnitude,
            Params::BrightnessIncrease { delta } | Params::BrightnessDecrease { delta } => *delta,
            Params::RandomToneCurve { strength, .. } => *strength,
            Params::Clahe { clip_limit, .. } => *clip_limit,
            Params::JpegCompression { quality } => 100.0 - *quality as f64,
            Params::MultipleJpegCompressions { qualities } => {
                qualities.iter().map(|&q| 100.0 - q as f64).sum()
            }
            Params::RandomCrop { keep, .. } => 1.0 - keep,
            Params::RandomAspectCrop { trim, .. } => *trim,
            Params::Downscale { factor } => 1.0 - factor,
            Params::PerspectiveTransform { jitter, .. } => *jitter,
            Params::SquishResize { .. } => 0.0,
        }
    }

    /// Range checks on the table-level fields.
    pub fn validate(&self) -> Result<(), DistortionError> {
        let kind = self.kind();
        let bad = |reason: String| Err(DistortionError::InvalidParams { kind, reason });
        let finite_nonneg = |name: &str, v: f64| -> Result<(), DistortionError> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(DistortionError::InvalidParams {
                    kind,
                    reason: format!("{name} must be finite and >= 0, got {v}"),
                })
            }
        };
        match self {
            Params::GaussianBlur { sigma } => finite_nonneg("sigma", *sigma),
            Params::LensBlur { radius } => finite_nonneg("radius", *radius),
            Params::MotionBlur { length, angle_deg } => {
                finite_nonneg("length", *length)?;
                match angle_deg {
                    Some(a) if !a.is_finite() => bad(format!("angle_deg not finite: {a}")),
                    _ => Ok(()),
                }
            }
            Params::GlassBlur { sigma, .. } => finite_nonneg("sigma", *sigma),
            Params::Pixelate { block } if *block == 0 => bad("block must be >= 1".into()),
            Params::Pixelate { .. } => Ok(()),
            Params::WhiteNoise { sigma }
            | Params::MultiplicativeNoise { sigma }
            | Params::IsoNoise { sigma } => finite_nonneg("sigma", *sigma),
            Params::ImpulseNoise { density } if !(0.0..=1.0).contains(density) => {
                bad(format!("density must lie in [0, 1], got {density}"))
            }
            Params::ImpulseNoise { .. } => Ok(()),
            Params::ShotNoise { photons } if !(photons.is_finite() && *photons > 0.0) => {
                bad(format!("photons must be > 0, got {photons}"))
            }
            Params::ShotNoise { .. } => Ok(()),
            Params::ColorShift { hue_deg, .. } => finite_nonneg("hue_deg", *hue_deg),
            Params::ColorSaturation { factor } => finite_nonneg("factor", *factor),
            Params::ColorJitter { strength, .. } if !(0.0..=1.0).contains(strength) => {
                bad(format!("strength must lie in [0, 1], got {strength}"))
            }
            Params::ColorJitter { .. } => Ok(()),
            Params::ColorQuantization { bins } if !(2..=256).contains(bins) => {
                bad(format!("bins must lie in [2, 256], got {bins}"))
            }
            Params::ColorQuantization { .. } => Ok(()),
            Params::RgbChannelShift { .. } => Ok(()),
            Params::ColorCast { magnitude, .. } => finite_nonneg("magnitude", *magnitude),
            Params::BrightnessIncrease { delta } | Params::BrightnessDecrease { delta } => {
                finite_nonneg("delta", *delta)
            }
            Params::LinearContrastChange { factor } => finite_nonneg("factor", *factor),
            Params::RandomToneCurve { strength, .. } if !(0.0..=0.25).contains(strength) => {
                bad(format!("strength must lie in [0, 0.25], got {strength}"))
            }
            Params::RandomToneCurve { .. } => Ok(()),
            Params::Clahe { clip_limit, tiles } => {
                if !(clip_limit.is_finite() && *clip_limit >= 1.0) {
                    bad(format!("clip_limit must be >= 1, got {clip_limit}"))
                } else if *tiles == 0 {
                    bad("tiles must be >= 1".into())
                } else {
                    Ok(())
                }
            }
            Params::JpegCompression { quality } if !(1..=100).contains(quality) => {
                bad(format!("quality must lie in [1, 100], got {quality}"))
            }
            Params::JpegCompression { .. } => Ok(()),
            Params::MultipleJpegCompressions { qualities } => {
                if qualities.is_empty() {
                    bad("qualities must not be empty".into())
                } else if let Some(q) = qualities.iter().find(|q| !(1..=100).contains(*q)) {
                    bad(format!("quality must lie in [1, 100], got {q}"))
                } else {
                    Ok(())
                }
            }
            Params::RandomCrop { keep, .. } if !(*keep > 0.0 && *keep <= 1.0) => {
                bad(format!("keep must lie in (0, 1], got {keep}"))
            }
            Params::RandomCrop { .. } => Ok(()),
            Params::RandomAspectCrop { trim, .. } if !(*trim >= 0.0 && *trim < 1.0) => {
                bad(format!("trim must lie in [0, 1), got {trim}"))
            }
            Params::RandomAspectCrop { .. } => Ok(()),
            Params::Downscale { factor } if !(*factor > 0.0 && *factor <= 1.0) => {
                bad(format!("factor must lie in (0, 1], got {factor}"))
            }
            Params::Downscale { .. } => Ok(()),
            Params::PerspectiveTransform { jitter, .. } if !(0.0..0.5).contains(jitter) => {
                bad(format!("jitter must lie in [0, 0.5), got {jitter}"))
            }
            Params::PerspectiveTransform { .. } => Ok(()),
            Params::SquishResize { width, height } if *width == 0 || *height == 0 => {
                bad("target size must be at least 1x1".into())
            }
            Params::SquishResize { .. } => Ok(()),
        }
    }
}
