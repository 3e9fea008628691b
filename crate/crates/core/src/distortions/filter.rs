//! Convolution, resampling and warping on float planes.
//!
//! All neighbourhood reads outside the image use reflect-101 padding
//! (`dcb|abcd|cba`).

use crate::image::FloatPlane;

/// Reflect-101 index into `0..n`.
#[inline]
pub fn reflect101(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * n as isize - 2;
    let m = i.rem_euclid(period);
    if m >= n as isize {
        (period - m) as usize
    } else {
        m as usize
    }
}

/// Sampled Gaussian truncated at radius `ceil(3 sigma)` and renormalised.
/// `sigma <= 0` gives the identity kernel `[1.0]`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return vec![1.0];
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let denom = 2.0 * sigma * sigma;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|x| libm::exp(-((x * x) as f64) / denom))
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Separable convolution with a symmetric odd-length kernel.
pub fn convolve_separable(plane: &FloatPlane, kernel: &[f64]) -> FloatPlane {
    if kernel.len() == 1 {
        return plane.clone();
    }
    let (w, h) = (plane.width as usize, plane.height as usize);
    let r = (kernel.len() / 2) as isize;
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        let row = &plane.data[y * w..(y + 1) * w];
        for x in 0..w {
            let mut acc = 0.0;
            for (k, &kv) in kernel.iter().enumerate() {
                acc += kv * row[reflect101(x as isize + k as isize - r, w)];
            }
            tmp[y * w + x] = acc;
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for (k, &kv) in kernel.iter().enumerate() {
            let sy = reflect101(y as isize + k as isize - r, h);
            let src = &tmp[sy * w..(sy + 1) * w];
            let dst = &mut out[y * w..(y + 1) * w];
            for x in 0..w {
                dst[x] += kv * src[x];
            }
        }
    }
    FloatPlane::new(plane.width, plane.height, out)
}

/// A 2-D kernel as a list of `(dx, dy, weight)` taps.
pub type SparseKernel = Vec<(isize, isize, f64)>;

pub fn convolve_sparse(plane: &FloatPlane, taps: &[(isize, isize, f64)]) -> FloatPlane {
    if taps.len() == 1 && taps[0].0 == 0 && taps[0].1 == 0 {
        return plane.clone();
    }
    let (w, h) = (plane.width as usize, plane.height as usize);
    let mut out = vec![0.0; w * h];
    for &(dx, dy, wt) in taps {
        let cols: Vec<usize> = (0..w).map(|x| reflect101(x as isize + dx, w)).collect();
        for y in 0..h {
            let sy = reflect101(y as isize + dy, h);
            let src = &plane.data[sy * w..(sy + 1) * w];
            let dst = &mut out[y * w..(y + 1) * w];
            for x in 0..w {
                dst[x] += wt * src[cols[x]];
            }
        }
    }
    FloatPlane::new(plane.width, plane.height, out)
}

fn normalize(mut taps: SparseKernel) -> SparseKernel {
    let sum: f64 = taps.iter().map(|t| t.2).sum();
    taps.iter_mut().for_each(|t| t.2 /= sum);
    taps
}

/// Uniform disk: every offset with `dx^2 + dy^2 <= radius^2`.
pub fn disk_kernel(radius: f64) -> SparseKernel {
    let r = radius.max(0.0).floor() as isize;
    let r2 = radius * radius;
    let mut taps = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if ((dx * dx + dy * dy) as f64) <= r2 {
                taps.push((dx, dy, 1.0));
            }
        }
    }
    if taps.is_empty() {
        taps.push((0, 0, 1.0));
    }
    normalize(taps)
}

/// Line of `length` pixels through the origin at `angle_deg`, sampled at
/// four points per pixel and snapped to the nearest integer offset.
pub fn motion_kernel(length: f64, angle_deg: f64) -> SparseKernel {
    if length <= 1.0 {
        return vec![(0, 0, 1.0)];
    }
    let theta = angle_deg.to_radians();
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    let samples = (length.ceil() as usize) * 4 + 1;
    let half = (length - 1.0) / 2.0;
    let mut acc: std::collections::BTreeMap<(isize, isize), f64> = Default::default();
    for i in 0..samples {
        let t = -half + 2.0 * half * i as f64 / (samples - 1) as f64;
        let key = ((t * c).round() as isize, (t * s).round() as isize);
        *acc.entry(key).or_insert(0.0) += 1.0;
    }
    normalize(acc.into_iter().map(|((dx, dy), w)| (dx, dy, w)).collect())
}

/// Bilinear sample at continuous coordinates with edge clamping.
#[inline]
pub fn sample_bilinear(plane: &FloatPlane, x: f64, y: f64) -> f64 {
    let (w, h) = (plane.width as usize, plane.height as usize);
    let x = x.clamp(0.0, (w - 1) as f64);
    let y = y.clamp(0.0, (h - 1) as f64);
    let x0 = x.floor() as usize;
    let y0 = y.floor() as usize;
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let fx = x - x0 as f64;
    let fy = y - y0 as f64;
    let top = plane.get(x0, y0) * (1.0 - fx) + plane.get(x1, y0) * fx;
    let bottom = plane.get(x0, y1) * (1.0 - fx) + plane.get(x1, y1) * fx;
    top * (1.0 - fy) + bottom * fy
}

/// Bilinear resize with half-pixel centres (`align_corners = false`).
pub fn resize_bilinear(plane: &FloatPlane, new_w: u32, new_h: u32) -> FloatPlane {
    if (new_w, new_h) == (plane.width, plane.height) {
        return plane.clone();
    }
    let sx = plane.width as f64 / new_w as f64;
    let sy = plane.height as f64 / new_h as f64;
    let mut out = FloatPlane::zeros(new_w, new_h);
    for y in 0..new_h as usize {
        let fy = (y as f64 + 0.5) * sy - 0.5;
        for x in 0..new_w as usize {
            let fx = (x as f64 + 0.5) * sx - 0.5;
            out.set(x, y, sample_bilinear(plane, fx, fy));
        }
    }
    out
}

/// Overlap weights of output cells `[i*s, (i+1)*s)` against unit input cells.
fn area_weights(src: usize, dst: usize) -> Vec<Vec<(usize, f64)>> {
    let scale = src as f64 / dst as f64;
    (0..dst)
        .map(|i| {
            let start = i as f64 * scale;
            let end = (i + 1) as f64 * scale;
            let first = start.floor() as usize;
            let last = (end.ceil() as usize).min(src);
            let mut ws: Vec<(usize, f64)> = (first..last)
                .map(|j| {
                    let lo = start.max(j as f64);
                    let hi = end.min((j + 1) as f64);
                    (j, (hi - lo).max(0.0))
                })
                .filter(|&(_, w)| w > 0.0)
                .collect();
            let total: f64 = ws.iter().map(|w| w.1).sum();
            ws.iter_mut().for_each(|w| w.1 /= total);
            ws
        })
        .collect()
}

/// Box-filter (area-averaging) resample.
pub fn resize_area(plane: &FloatPlane, new_w: u32, new_h: u32) -> FloatPlane {
    if (new_w, new_h) == (plane.width, plane.height) {
        return plane.clone();
    }
    let (w, h) = (plane.width as usize, plane.height as usize);
    let xw = area_weights(w, new_w as usize);
    let yw = area_weights(h, new_h as usize);
    let mut tmp = vec![0.0; new_w as usize * h];
    for y in 0..h {
        for (x, weights) in xw.iter().enumerate() {
            tmp[y * new_w as usize + x] = weights.iter().map(|&(j, wt)| wt * plane.data[y * w + j]).sum();
        }
    }
    let mut out = FloatPlane::zeros(new_w, new_h);
    for (y, weights) in yw.iter().enumerate() {
        for x in 0..new_w as usize {
            let v = weights.iter().map(|&(j, wt)| wt * tmp[j * new_w as usize + x]).sum();
            out.set(x, y, v);
        }
    }
    out
}

/// Row-major 3x3 homography applied to `(x, y, 1)`.
pub type Homography = [f64; 9];

/// Homography taking each `from[i]` to `to[i]`.
pub fn homography_from_points(from: [[f64; 2]; 4], to: [[f64; 2]; 4]) -> Option<Homography> {
    use nalgebra::{SMatrix, SVector};
    let mut a = SMatrix::<f64, 8, 8>::zeros();
    let mut b = SVector::<f64, 8>::zeros();
    for i in 0..4 {
        let [x, y] = from[i];
        let [u, v] = to[i];
        let r = 2 * i;
        a.set_row(r, &nalgebra::RowSVector::<f64, 8>::from_row_slice(&[x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y]));
        a.set_row(r + 1, &nalgebra::RowSVector::<f64, 8>::from_row_slice(&[0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y]));
        b[r] = u;
        b[r + 1] = v;
    }
    let h = a.lu().solve(&b)?;
    Some([h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], 1.0])
}

/// For each output pixel, samples the source at `H * (x, y, 1)`.
pub fn warp_perspective(plane: &FloatPlane, h: &Homography) -> FloatPlane {
    let mut out = FloatPlane::zeros(plane.width, plane.height);
    for y in 0..plane.height as usize {
        for x in 0..plane.width as usize {
            let (xf, yf) = (x as f64, y as f64);
            let d = h[6] * xf + h[7] * yf + h[8];
            let sx = (h[0] * xf + h[1] * yf + h[2]) / d;
            let sy = (h[3] * xf + h[4] * yf + h[5]) / d;
            out.set(x, y, sample_bilinear(plane, sx, sy));
        }
    }
    out
}
