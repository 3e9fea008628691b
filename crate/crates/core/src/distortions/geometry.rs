use super::filter::{self, homography_from_points, warp_perspective};
use super::{join, planes, CropWindow};
use crate::image::ImageBuffer;

/// `None` when the window does not fit inside the image.
pub(super) fn crop(img: &ImageBuffer, win: CropWindow) -> Option<ImageBuffer> {
    let (w, h) = img.dimensions();
    if win.width == 0
        || win.height == 0
        || win.x.checked_add(win.width)? > w
        || win.y.checked_add(win.height)? > h
    {
        return None;
    }
    Some(ImageBuffer::from_fn(win.width, win.height, |x, y| {
        img.pixel(win.x + x, win.y + y)
    }))
}

pub(super) fn resize_area(img: &ImageBuffer, w: u32, h: u32) -> ImageBuffer {
    if img.dimensions() == (w, h) {
        return img.clone();
    }
    join(&planes(img).map(|p| filter::resize_area(&p, w, h)))
}

pub(super) fn resize_bilinear(img: &ImageBuffer, w: u32, h: u32) -> ImageBuffer {
    if img.dimensions() == (w, h) {
        return img.clone();
    }
    join(&planes(img).map(|p| filter::resize_bilinear(&p, w, h)))
}

/// Warps the quadrilateral formed by the displaced corners onto the full
/// frame. Zero displacement is the identity.
pub(super) fn perspective(img: &ImageBuffer, corners: [f64; 8]) -> Option<ImageBuffer> {
    if corners.iter().all(|&c| c == 0.0) {
        return Some(img.clone());
    }
    let (w, h) = (img.width() as f64 - 1.0, img.height() as f64 - 1.0);
    let frame = [[0.0, 0.0], [w, 0.0], [w, h], [0.0, h]];
    let mut quad = frame;
    for i in 0..4 {
        quad[i][0] += corners[2 * i];
        quad[i][1] += corners[2 * i + 1];
    }
    let hom = homography_from_points(frame, quad)?;
    Some(join(&planes(img).map(|p| warp_perspective(&p, &hom))))
}
