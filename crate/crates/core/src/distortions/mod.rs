//! The degradation catalogue.
//!
//! Each transform is described by a [`DistortionSpec`] (kind, severity level,
//! parameters). [`apply`] is pure given `(image, spec, rng)`: it first fills
//! any per-application draws (crop offsets, angles, tint vectors, curve
//! points) from one child stream, then renders using a second child stream
//! for pixel noise. Resolved draws are returned in the output spec so a
//! manifest can replay them exactly.

mod blur;
mod clahe;
mod color;
pub mod external;
pub mod filter;
mod geometry;
mod kind;
mod noise;
mod params;
mod table;

pub use clahe::{clahe_luma, clip_histogram, redistribute_excess, tile_bounds};
pub use kind::{DistortionGroup, DistortionKind, UnknownKind};
pub use params::{CropAxis, CropWindow, Params};
pub use table::{SeverityTable, TableFormat};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::image::{self, FloatPlane, ImageBuffer, ImageError};
use crate::rng::SeededRng;

const RESOLVE_STREAM: u64 = 1;
const RENDER_STREAM: u64 = 2;

#[derive(Debug, Error)]
pub enum DistortionError {
    #[error("{kind}: image {width}x{height} too small: {reason}")]
    Sizing {
        kind: DistortionKind,
        width: u32,
        height: u32,
        reason: String,
    },
    #[error("{kind}: invalid parameters: {reason}")]
    InvalidParams { kind: DistortionKind, reason: String },
    #[error("{kind}: level {level} outside 1..={num_levels}")]
    LevelOutOfRange {
        kind: DistortionKind,
        level: u8,
        num_levels: u8,
    },
    #[error("{kind}: recorded group `{recorded}` does not match `{expected}`")]
    GroupMismatch {
        kind: DistortionKind,
        recorded: DistortionGroup,
        expected: DistortionGroup,
    },
    #[error("severity table has no entry for {0}")]
    MissingKind(DistortionKind),
    #[error("severity table config: {0}")]
    Config(String),
    #[error("external transform `{name}`: {reason}")]
    External { name: String, reason: String },
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// One transform instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionSpec {
    #[serde(flatten)]
    pub params: Params,
    pub level: u8,
    pub group: DistortionGroup,
}

impl DistortionSpec {
    pub fn new(params: Params, level: u8) -> Self {
        let group = params.kind().group();
        Self {
            params,
            level,
            group,
        }
    }

    pub fn kind(&self) -> DistortionKind {
        self.params.kind()
    }

    /// Structural checks used before replaying a recorded spec.
    pub fn validate(&self, num_levels: u8) -> Result<(), DistortionError> {
        let kind = self.kind();
        if self.level == 0 || self.level > num_levels {
            return Err(DistortionError::LevelOutOfRange {
                kind,
                level: self.level,
                num_levels,
            });
        }
        if self.group != kind.group() {
            return Err(DistortionError::GroupMismatch {
                kind,
                recorded: self.group,
                expected: kind.group(),
            });
        }
        self.params.validate()
    }
}

/// Output of [`apply`]: the distorted image and the fully resolved spec.
#[derive(Debug, Clone)]
pub struct Applied {
    pub image: ImageBuffer,
    pub spec: DistortionSpec,
}

/// Fills any unresolved per-application draws for an input of `dims`.
pub fn resolve(spec: &DistortionSpec, dims: (u32, u32), rng: &SeededRng) -> Result<DistortionSpec, DistortionError> {
    if spec.params.is_resolved() {
        return Ok(spec.clone());
    }
    let mut draws = rng.derive(RESOLVE_STREAM);
    let params = match &spec.params {
        Params::MotionBlur { length, .. } => Params::MotionBlur {
            length: *length,
            angle_deg: Some(360.0 * draws.uniform()),
        },
        Params::ColorShift { hue_deg, .. } => {
            let sign = if draws.coin() { 1.0 } else { -1.0 };
            Params::ColorShift {
                hue_deg: *hue_deg,
                shift_deg: Some(sign * hue_deg),
            }
        }
        Params::ColorJitter { strength, .. } => {
            let factors = [(); 3].map(|_| 1.0 + strength * draws.signed_unit());
            Params::ColorJitter {
                strength: *strength,
                factors: Some(factors),
            }
        }
        Params::RgbChannelShift { shift, .. } => {
            let mut offsets = [0i32; 4];
            for pair in offsets.chunks_exact_mut(2) {
                let theta = std::f64::consts::TAU * draws.uniform();
                pair[0] = (*shift as f64 * libm::cos(theta)).round() as i32;
                pair[1] = (*shift as f64 * libm::sin(theta)).round() as i32;
            }
            Params::RgbChannelShift {
                shift: *shift,
                offsets: Some(offsets),
            }
        }
        Params::ColorCast { magnitude, .. } => {
            let mut v = [(); 3].map(|_| draws.standard_normal());
            let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
            if norm > 0.0 {
                v.iter_mut().for_each(|x| *x *= magnitude / norm);
            }
            Params::ColorCast {
                magnitude: *magnitude,
                tint: Some(v),
            }
        }
        Params::RandomToneCurve { strength, .. } => {
            let mut pts = [0.25, 0.5, 0.75];
            for p in pts.iter_mut() {
                *p += strength * draws.signed_unit();
            }
            let mut floor = 0.0f64;
            for p in pts.iter_mut() {
                *p = p.clamp(floor, 1.0);
                floor = *p;
            }
            Params::RandomToneCurve {
                strength: *strength,
                points: Some(pts),
            }
        }
        Params::RandomCrop { keep, .. } => {
            let (w, h) = dims;
            let cw = scaled_side(w, *keep);
            let ch = scaled_side(h, *keep);
            let x = offset(&mut draws, w - cw);
            let y = offset(&mut draws, h - ch);
            Params::RandomCrop {
                keep: *keep,
                window: Some(CropWindow {
                    x,
                    y,
                    width: cw,
                    height: ch,
                }),
            }
        }
        Params::RandomAspectCrop { trim, .. } => {
            let (w, h) = dims;
            let axis = if draws.coin() {
                CropAxis::Horizontal
            } else {
                CropAxis::Vertical
            };
            let u = draws.uniform();
            let window = match axis {
                CropAxis::Horizontal => {
                    let cw = scaled_side(w, 1.0 - trim);
                    let x = ((w - cw + 1) as f64 * u).floor() as u32;
                    CropWindow {
                        x: x.min(w - cw),
                        y: 0,
                        width: cw,
                        height: h,
                    }
                }
                CropAxis::Vertical => {
                    let ch = scaled_side(h, 1.0 - trim);
                    let y = ((h - ch + 1) as f64 * u).floor() as u32;
                    CropWindow {
                        x: 0,
                        y: y.min(h - ch),
                        width: w,
                        height: ch,
                    }
                }
            };
            Params::RandomAspectCrop {
                trim: *trim,
                axis: Some(axis),
                window: Some(window),
            }
        }
        Params::PerspectiveTransform { jitter, .. } => {
            let reach = jitter * dims.0.min(dims.1) as f64;
            // Inward directions for TL, TR, BR, BL.
            let dirs = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)];
            let mut corners = [0.0; 8];
            for (i, (sx, sy)) in dirs.iter().enumerate() {
                corners[2 * i] = sx * reach * draws.uniform();
                corners[2 * i + 1] = sy * reach * draws.uniform();
            }
            Params::PerspectiveTransform {
                jitter: *jitter,
                corners: Some(corners),
            }
        }
        other => other.clone(),
    };
    Ok(DistortionSpec {
        params,
        level: spec.level,
        group: spec.group,
    })
}

/// `max(1, round(side * fraction))`, capped at `side`.
pub fn scaled_side(side: u32, fraction: f64) -> u32 {
    ((side as f64 * fraction).round() as u32).clamp(1, side)
}

fn offset(draws: &mut SeededRng, slack: u32) -> u32 {
    ((slack + 1) as f64 * draws.uniform()).floor().min(slack as f64) as u32
}

/// Applies one transform. Geometric kinds may change the dimensions; all
/// others preserve them.
pub fn apply(img: &ImageBuffer, spec: &DistortionSpec, rng: &SeededRng) -> Result<Applied, DistortionError> {
    spec.params.validate()?;
    let resolved = resolve(spec, img.dimensions(), rng)?;
    let mut noise = rng.derive(RENDER_STREAM);
    let kind = resolved.kind();
    let image = match &resolved.params {
        Params::GaussianBlur { sigma } => blur::gaussian(img, *sigma),
        Params::LensBlur { radius } => blur::lens(img, *radius),
        Params::MotionBlur { length, angle_deg } => blur::motion(img, *length, angle_deg.unwrap_or(0.0)),
        Params::GlassBlur {
            sigma,
            delta,
            iterations,
        } => blur::glass(img, *sigma, *delta, *iterations, &mut noise),
        Params::Pixelate { block } => blur::pixelate(img, *block),
        Params::WhiteNoise { sigma } => noise::white(img, *sigma, &mut noise),
        Params::ImpulseNoise { density } => noise::impulse(img, *density, &mut noise),
        Params::MultiplicativeNoise { sigma } => noise::multiplicative(img, *sigma, &mut noise),
        Params::ShotNoise { photons } => noise::shot(img, *photons, &mut noise),
        Params::IsoNoise { sigma } => noise::iso(img, *sigma, &mut noise),
        Params::ColorShift { shift_deg, .. } => color::hue_shift(img, shift_deg.unwrap_or(0.0)),
        Params::ColorSaturation { factor } => color::saturation(img, *factor),
        Params::ColorJitter { factors, .. } => color::jitter(img, factors.unwrap_or([1.0; 3])),
        Params::ColorQuantization { bins } => color::quantize(img, *bins),
        Params::RgbChannelShift { offsets, .. } => color::channel_shift(img, offsets.unwrap_or([0; 4])),
        Params::ColorCast { tint, .. } => color::cast(img, tint.unwrap_or([0.0; 3])),
        Params::BrightnessIncrease { delta } => color::offset(img, *delta / 255.0),
        Params::BrightnessDecrease { delta } => color::offset(img, -*delta / 255.0),
        Params::LinearContrastChange { factor } => color::contrast(img, *factor),
        Params::RandomToneCurve { points, .. } => color::tone_curve(img, points.unwrap_or([0.25, 0.5, 0.75])),
        Params::Clahe { clip_limit, tiles } => clahe::clahe_rgb(img, *clip_limit, *tiles),
        Params::JpegCompression { quality } => jpeg_roundtrip(img, *quality)?,
        Params::MultipleJpegCompressions { qualities } => {
            let mut cur = img.clone();
            for &q in qualities {
                cur = jpeg_roundtrip(&cur, q)?;
            }
            cur
        }
        Params::RandomCrop { window, .. } | Params::RandomAspectCrop { window, .. } => {
            let window = window.expect("resolved");
            geometry::crop(img, window).ok_or_else(|| DistortionError::Sizing {
                kind,
                width: img.width(),
                height: img.height(),
                reason: format!(
                    "crop window {}x{}+{}+{} exceeds the image",
                    window.width, window.height, window.x, window.y
                ),
            })?
        }
        Params::Downscale { factor } => {
            let (w, h) = img.dimensions();
            geometry::resize_area(img, scaled_side(w, *factor), scaled_side(h, *factor))
        }
        Params::PerspectiveTransform { corners, .. } => {
            if img.width() < 2 || img.height() < 2 {
                return Err(DistortionError::Sizing {
                    kind,
                    width: img.width(),
                    height: img.height(),
                    reason: "needs at least 2x2 pixels".into(),
                });
            }
            geometry::perspective(img, corners.unwrap_or([0.0; 8])).ok_or_else(|| {
                DistortionError::InvalidParams {
                    kind,
                    reason: "degenerate corner configuration".into(),
                }
            })?
        }
        Params::SquishResize { width, height } => squish_resize(img, *width, *height),
    };
    Ok(Applied {
        image,
        spec: resolved,
    })
}

/// Encode as baseline JPEG at `quality` and decode again.
pub fn jpeg_roundtrip(img: &ImageBuffer, quality: u8) -> Result<ImageBuffer, ImageError> {
    image::io::decode(&image::io::encode_jpeg(img, quality)?)
}

/// Bilinear resize to exactly `width x height`, ignoring aspect ratio.
pub fn squish_resize(img: &ImageBuffer, width: u32, height: u32) -> ImageBuffer {
    geometry::resize_bilinear(img, width, height)
}

pub(crate) fn planes(img: &ImageBuffer) -> [FloatPlane; 3] {
    image::to_float(img)
}

pub(crate) fn join(planes: &[FloatPlane; 3]) -> ImageBuffer {
    image::from_float(&planes[0], &planes[1], &planes[2]).expect("planes share dimensions")
}

pub(crate) fn map_unit(img: &ImageBuffer, mut f: impl FnMut([f64; 3]) -> [f64; 3]) -> ImageBuffer {
    img.map_pixels(|px| f(px.map(|v| v as f64 / 255.0)).map(image::quantize_unit))
}
