use super::{quantize_unit, ImageBuffer};

/// RGB in `[0,1]` to HSV with hue in degrees `[0, 360)`.
pub fn rgb_to_hsv(rgb: [f64; 3]) -> [f64; 3] {
    let [r, g, b] = rgb;
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let v = max;
    let s = if max > 0.0 { delta / max } else { 0.0 };
    if delta == 0.0 {
        return [0.0, s, v];
    }
    let sector = if max == r {
        ((g - b) / delta).rem_euclid(6.0)
    } else if max == g {
        (b - r) / delta + 2.0
    } else {
        (r - g) / delta + 4.0
    };
    [(sector * 60.0).rem_euclid(360.0), s, v]
}

pub fn hsv_to_rgb(hsv: [f64; 3]) -> [f64; 3] {
    let [h, s, v] = hsv;
    let c = v * s;
    let hp = h.rem_euclid(360.0) / 60.0;
    let x = c * (1.0 - (hp.rem_euclid(2.0) - 1.0).abs());
    let (r1, g1, b1) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    [r1 + m, g1 + m, b1 + m]
}

/// Full-range BT.601 (JFIF) conversion; chroma is centred on 0.
pub fn rgb_to_ycbcr(rgb: [f64; 3]) -> [f64; 3] {
    let [r, g, b] = rgb;
    let y = 0.299 * r + 0.587 * g + 0.114 * b;
    let cb = -0.168_735_891_647_856 * r - 0.331_264_108_352_144 * g + 0.5 * b;
    let cr = 0.5 * r - 0.418_687_589_158_345 * g - 0.081_312_410_841_655 * b;
    [y, cb, cr]
}

pub fn ycbcr_to_rgb(ycc: [f64; 3]) -> [f64; 3] {
    let [y, cb, cr] = ycc;
    [
        y + 1.402 * cr,
        y - 0.344_136_286_201_022 * cb - 0.714_136_286_201_022 * cr,
        y + 1.772 * cb,
    ]
}

/// RGB -> HSV -> RGB with no modification in between.
pub fn rgb_hsv_roundtrip(img: &ImageBuffer) -> ImageBuffer {
    img.map_pixels(|px| {
        let unit = px.map(|v| v as f64 / 255.0);
        hsv_to_rgb(rgb_to_hsv(unit)).map(quantize_unit)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(px: [u8; 3]) -> [f64; 3] {
        px.map(|v| v as f64 / 255.0)
    }

    #[test]
    fn pure_red() {
        assert_eq!(rgb_to_hsv(unit([255, 0, 0])), [0.0, 1.0, 1.0]);
        let img = ImageBuffer::filled(1, 1, [255, 0, 0]);
        assert_eq!(rgb_hsv_roundtrip(&img), img);
    }

    #[test]
    fn gray_has_zero_saturation() {
        let [_, s, _] = rgb_to_hsv(unit([100, 100, 100]));
        assert_eq!(s, 0.0);
        let img = ImageBuffer::filled(2, 2, [100, 100, 100]);
        assert_eq!(rgb_hsv_roundtrip(&img), img);
    }

    #[test]
    fn green_dominant_roundtrip() {
        // Reference: V = 200/255, S = 190/200, H = 60 * (2 + (30 - 10)/190) = 126.315...
        let [h, s, v] = rgb_to_hsv(unit([10, 200, 30]));
        assert!((h - 126.315_789_473_684_2).abs() < 1e-9);
        assert!((s - 0.95).abs() < 1e-12);
        assert!((v - 200.0 / 255.0).abs() < 1e-12);
        let img = ImageBuffer::filled(1, 1, [10, 200, 30]);
        let back = rgb_hsv_roundtrip(&img).pixel(0, 0);
        for c in 0..3 {
            assert!((back[c] as i32 - [10, 200, 30][c]).abs() <= 1);
        }
    }

    #[test]
    fn hsv_roundtrip_exhaustive_coarse() {
        for r in (0..=255).step_by(5) {
            for g in (0..=255).step_by(5) {
                for b in (0..=255).step_by(5) {
                    let px = [r as u8, g as u8, b as u8];
                    let back = hsv_to_rgb(rgb_to_hsv(unit(px))).map(quantize_unit);
                    for c in 0..3 {
                        assert!((back[c] as i32 - px[c] as i32).abs() <= 1, "{px:?} {back:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn ycbcr_roundtrip() {
        for px in [[0u8, 0, 0], [255, 255, 255], [12, 200, 99], [255, 0, 128]] {
            let back = ycbcr_to_rgb(rgb_to_ycbcr(unit(px))).map(quantize_unit);
            assert_eq!(back, px);
        }
    }
}
