//! 8-bit RGB rasters, float planes and colour-space helpers.

mod color;
pub mod io;

pub use color::{hsv_to_rgb, rgb_hsv_roundtrip, rgb_to_hsv, rgb_to_ycbcr, ycbcr_to_rgb};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("image dimensions must be at least 1x1, got {width}x{height}")]
    EmptyDimensions { width: u32, height: u32 },
    #[error("sample buffer has {actual} bytes, expected {expected} for {width}x{height} RGB")]
    BufferLength {
        width: u32,
        height: u32,
        expected: usize,
        actual: usize,
    },
    #[error("plane dimensions differ: {0:?}")]
    DimensionMismatch(Vec<(u32, u32)>),
    #[error("unsupported image format")]
    UnsupportedFormat,
    #[error("png decode: {0}")]
    PngDecode(#[from] png::DecodingError),
    #[error("png encode: {0}")]
    PngEncode(#[from] png::EncodingError),
    #[error("jpeg decode: {0}")]
    JpegDecode(#[from] jpeg_decoder::Error),
    #[error("jpeg encode: {0}")]
    JpegEncode(#[from] jpeg_encoder::EncodingError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Round half away from zero after clamping to `[0, 1]`, then scale to 8 bits.
#[inline]
pub fn quantize_unit(v: f64) -> u8 {
    quantize_255(v * 255.0)
}

/// Round half away from zero and saturate to `[0, 255]`.
#[inline]
pub fn quantize_255(v: f64) -> u8 {
    if v.is_nan() {
        return 0;
    }
    v.clamp(0.0, 255.0).round() as u8
}

/// Owned, row-major, interleaved 8-bit RGB image.
#[derive(Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl std::fmt::Debug for ImageBuffer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ImageBuffer")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl ImageBuffer {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyDimensions { width, height });
        }
        let expected = width as usize * height as usize * 3;
        if data.len() != expected {
            return Err(ImageError::BufferLength {
                width,
                height,
                expected,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Constant-colour image. Panics on zero dimensions.
    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "empty image");
        let data = rgb
            .iter()
            .copied()
            .cycle()
            .take(width as usize * height as usize * 3)
            .collect();
        Self {
            width,
            height,
            data,
        }
    }

    /// Builds an image from a per-pixel function of `(x, y)`.
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "empty image");
        let mut data = Vec::with_capacity(width as usize * height as usize * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.data
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn put_pixel(&mut self, x: u32, y: u32, rgb: [u8; 3]) {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    pub fn pixels(&self) -> impl Iterator<Item = [u8; 3]> + '_ {
        self.data.chunks_exact(3).map(|p| [p[0], p[1], p[2]])
    }

    /// Applies `f` to every pixel in place.
    pub fn map_pixels(&self, mut f: impl FnMut([u8; 3]) -> [u8; 3]) -> ImageBuffer {
        let mut out = self.clone();
        for px in out.data.chunks_exact_mut(3) {
            let mapped = f([px[0], px[1], px[2]]);
            px.copy_from_slice(&mapped);
        }
        out
    }
}

/// Single-channel real-valued raster used between 8-bit stages.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPlane {
    pub width: u32,
    pub height: u32,
    pub data: Vec<f64>,
}

impl FloatPlane {
    pub fn new(width: u32, height: u32, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), width as usize * height as usize);
        Self {
            width,
            height,
            data,
        }
    }

    pub fn zeros(width: u32, height: u32) -> Self {
        Self::new(width, height, vec![0.0; width as usize * height as usize])
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width as usize + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        let w = self.width as usize;
        self.data[y * w + x] = v;
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> FloatPlane {
        FloatPlane::new(self.width, self.height, self.data.iter().map(|&v| f(v)).collect())
    }
}

/// Splits an image into R, G, B planes holding `sample / 255`.
pub fn to_float(img: &ImageBuffer) -> [FloatPlane; 3] {
    let n = img.pixel_count();
    let mut planes = [
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    ];
    for px in img.data.chunks_exact(3) {
        for c in 0..3 {
            planes[c].push(px[c] as f64 / 255.0);
        }
    }
    planes.map(|data| FloatPlane::new(img.width, img.height, data))
}

/// Joins three planes back to 8-bit with clamping and half-away-from-zero rounding.
pub fn from_float(r: &FloatPlane, g: &FloatPlane, b: &FloatPlane) -> Result<ImageBuffer, ImageError> {
    let dims = [(r.width, r.height), (g.width, g.height), (b.width, b.height)];
    if dims[0] != dims[1] || dims[0] != dims[2] {
        return Err(ImageError::DimensionMismatch(dims.to_vec()));
    }
    let mut data = Vec::with_capacity(r.data.len() * 3);
    for i in 0..r.data.len() {
        data.push(quantize_unit(r.data[i]));
        data.push(quantize_unit(g.data[i]));
        data.push(quantize_unit(b.data[i]));
    }
    ImageBuffer::new(r.width, r.height, data)
}
