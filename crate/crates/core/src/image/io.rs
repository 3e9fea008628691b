//! PNG / baseline JPEG ingest and encoding.
//!
//! Grayscale inputs are replicated to three channels; alpha is composited
//! over white and dropped.

use std::io::Cursor;
use std::path::Path;

use jpeg_encoder::{ColorType, Encoder, SamplingFactor};

use super::{ImageBuffer, ImageError};

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', 0x0D, 0x0A, 0x1A, 0x0A];

/// Quality at and above which chroma is kept at full resolution.
pub const JPEG_FULL_CHROMA_QUALITY: u8 = 90;

pub fn decode(bytes: &[u8]) -> Result<ImageBuffer, ImageError> {
    if bytes.starts_with(&PNG_SIGNATURE) {
        decode_png(bytes)
    } else if bytes.starts_with(&[0xFF, 0xD8]) {
        decode_jpeg(bytes)
    } else {
        Err(ImageError::UnsupportedFormat)
    }
}

pub fn load(path: &Path) -> Result<ImageBuffer, ImageError> {
    let bytes = std::fs::read(path).map_err(|source| ImageError::Io {
        path: path.display().to_string(),
        source,
    })?;
    decode(&bytes)
}

pub fn save_png(img: &ImageBuffer, path: &Path) -> Result<(), ImageError> {
    let bytes = encode_png(img)?;
    std::fs::write(path, bytes).map_err(|source| ImageError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[inline]
fn over_white(c: u8, a: u8) -> u8 {
    let v = c as u32 * a as u32 + 255 * (255 - a as u32);
    ((2 * v + 255) / 510) as u8
}

fn decode_png(bytes: &[u8]) -> Result<ImageBuffer, ImageError> {
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::normalize_to_color8());
    let mut reader = decoder.read_info()?;
    let mut buf = vec![0; reader.output_buffer_size().ok_or(ImageError::UnsupportedFormat)?];
    let info = reader.next_frame(&mut buf)?;
    let raw = &buf[..info.buffer_size()];
    let (width, height) = (info.width, info.height);
    let data: Vec<u8> = match info.color_type {
        png::ColorType::Rgb => raw.to_vec(),
        png::ColorType::Rgba => raw
            .chunks_exact(4)
            .flat_map(|p| [over_white(p[0], p[3]), over_white(p[1], p[3]), over_white(p[2], p[3])])
            .collect(),
        png::ColorType::Grayscale => raw.iter().flat_map(|&v| [v, v, v]).collect(),
        png::ColorType::GrayscaleAlpha => raw
            .chunks_exact(2)
            .flat_map(|p| {
                let v = over_white(p[0], p[1]);
                [v, v, v]
            })
            .collect(),
        png::ColorType::Indexed => return Err(ImageError::UnsupportedFormat),
    };
    ImageBuffer::new(width, height, data)
}

fn decode_jpeg(bytes: &[u8]) -> Result<ImageBuffer, ImageError> {
    let mut decoder = jpeg_decoder::Decoder::new(Cursor::new(bytes));
    let pixels = decoder.decode()?;
    let info = decoder.info().ok_or(ImageError::UnsupportedFormat)?;
    let data: Vec<u8> = match info.pixel_format {
        jpeg_decoder::PixelFormat::RGB24 => pixels,
        jpeg_decoder::PixelFormat::L8 => pixels.iter().flat_map(|&v| [v, v, v]).collect(),
        // Big-endian 16-bit luma; keep the high byte.
        jpeg_decoder::PixelFormat::L16 => pixels
            .chunks_exact(2)
            .flat_map(|p| [p[0], p[0], p[0]])
            .collect(),
        jpeg_decoder::PixelFormat::CMYK32 => return Err(ImageError::UnsupportedFormat),
    };
    ImageBuffer::new(info.width as u32, info.height as u32, data)
}

/// Lossless 8-bit RGB PNG with fixed encoder settings.
pub fn encode_png(img: &ImageBuffer) -> Result<Vec<u8>, ImageError> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, img.width(), img.height());
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        encoder.set_compression(png::Compression::Fast);
        let mut writer = encoder.write_header()?;
        writer.write_image_data(img.as_bytes())?;
        writer.finish()?;
    }
    Ok(out)
}

/// Baseline JPEG: Annex K tables scaled with the libjpeg quality rule,
/// 4:2:0 chroma below quality 90 and 4:4:4 from 90 up.
pub fn encode_jpeg(img: &ImageBuffer, quality: u8) -> Result<Vec<u8>, ImageError> {
    let (Ok(w), Ok(h)) = (u16::try_from(img.width()), u16::try_from(img.height())) else {
        return Err(ImageError::UnsupportedFormat);
    };
    let quality = quality.clamp(1, 100);
    let mut out = Vec::new();
    let mut encoder = Encoder::new(&mut out, quality);
    encoder.set_sampling_factor(if quality >= JPEG_FULL_CHROMA_QUALITY {
        SamplingFactor::F_1_1
    } else {
        SamplingFactor::F_2_2
    });
    encoder.set_progressive(false);
    encoder.set_optimized_huffman_tables(false);
    encoder.encode(img.as_bytes(), w, h, ColorType::Rgb)?;
    Ok(out)
}
