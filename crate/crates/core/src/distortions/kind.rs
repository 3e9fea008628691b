use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Coarse family a transform belongs to. Challenge-style plans draw at most
/// one transform per group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistortionGroup {
    Blur,
    Noise,
    Color,
    Tone,
    Compression,
    Geometric,
}

impl DistortionGroup {
    pub const ALL: [DistortionGroup; 6] = [
        DistortionGroup::Blur,
        DistortionGroup::Noise,
        DistortionGroup::Color,
        DistortionGroup::Tone,
        DistortionGroup::Compression,
        DistortionGroup::Geometric,
    ];
}

macro_rules! kinds {
    ($($variant:ident => $name:literal, $group:ident;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum DistortionKind {
            $($variant,)*
        }

        impl DistortionKind {
            pub const ALL: &'static [DistortionKind] = &[$(DistortionKind::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(DistortionKind::$variant => $name,)*
                }
            }

            pub fn group(self) -> DistortionGroup {
                match self {
                    $(DistortionKind::$variant => DistortionGroup::$group,)*
                }
            }
        }
    };
}

kinds! {
    GaussianBlur => "gaussian_blur", Blur;
    LensBlur => "lens_blur", Blur;
    MotionBlur => "motion_blur", Blur;
    GlassBlur => "glass_blur", Blur;
    Pixelate => "pixelate", Blur;
    WhiteNoise => "white_noise", Noise;
    ImpulseNoise => "impulse_noise", Noise;
    MultiplicativeNoise => "multiplicative_noise", Noise;
    ShotNoise => "shot_noise", Noise;
    IsoNoise => "iso_noise", Noise;
    ColorShift => "color_shift", Color;
    ColorSaturation => "color_saturation", Color;
    ColorJitter => "color_jitter", Color;
    ColorQuantization => "color_quantization", Color;
    RgbChannelShift => "rgb_channel_shift", Color;
    ColorCast => "color_cast", Color;
    BrightnessIncrease => "brightness_increase", Tone;
    BrightnessDecrease => "brightness_decrease", Tone;
    LinearContrastChange => "linear_contrast_change", Tone;
    RandomToneCurve => "random_tone_curve", Tone;
    Clahe => "clahe", Tone;
    JpegCompression => "jpeg_compression", Compression;
    MultipleJpegCompressions => "multiple_jpeg_compressions", Compression;
    RandomCrop => "random_crop", Geometric;
    RandomAspectCrop => "random_aspect_crop", Geometric;
    Downscale => "downscale", Geometric;
    PerspectiveTransform => "perspective_transform", Geometric;
    SquishResize => "squish_resize", Geometric;
}

impl DistortionKind {
    /// Kinds that change the output dimensions (or may).
    pub fn is_geometric(self) -> bool {
        self.group() == DistortionGroup::Geometric
    }
}

impl fmt::Display for DistortionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for DistortionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DistortionGroup::Blur => "blur",
            DistortionGroup::Noise => "noise",
            DistortionGroup::Color => "color",
            DistortionGroup::Tone => "tone",
            DistortionGroup::Compression => "compression",
            DistortionGroup::Geometric => "geometric",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown distortion kind `{0}`")]
pub struct UnknownKind(pub String);

impl FromStr for DistortionKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DistortionKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownKind(s.to_string()))
    }
}
