use serde::{Serialize, Serializer};

use super::MetricError;
use crate::image::ImageBuffer;

/// Peak signal-to-noise ratio; identical inputs have no finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Identical,
    Db(f64),
}

impl Psnr {
    /// `+inf` for [`Psnr::Identical`], for ordering and averaging.
    pub fn as_f64(self) -> f64 {
        match self {
            Psnr::Identical => f64::INFINITY,
            Psnr::Db(v) => v,
        }
    }
}

impl Serialize for Psnr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Psnr::Identical => s.serialize_str("identical"),
            Psnr::Db(v) => s.serialize_f64(*v),
        }
    }
}

/// `10 log10(255^2 / MSE)` over all samples of both images.
pub fn psnr(a: &ImageBuffer, b: &ImageBuffer) -> Result<Psnr, MetricError> {
    if a.dimensions() != b.dimensions() {
        return Err(MetricError::DimensionMismatch(a.dimensions(), b.dimensions()));
    }
    let sse: u64 = a
        .as_bytes()
        .iter()
        .zip(b.as_bytes())
        .map(|(&x, &y)| {
            let d = x as i64 - y as i64;
            (d * d) as u64
        })
        .sum();
    if sse == 0 {
        return Ok(Psnr::Identical);
    }
    let mse = sse as f64 / a.as_bytes().len() as f64;
    Ok(Psnr::Db(10.0 * (255.0 * 255.0 / mse).log10()))
}
