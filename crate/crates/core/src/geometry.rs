//! Axis-aligned boxes, IoU and the crop-and-resize operator.

use crate::error::{Error, Result};

/// Axis-aligned box in pixel units: top-left corner `(u, v)`, width `w`,
/// height `h`. Width and height are strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    u: f64,
    v: f64,
    w: f64,
    h: f64,
}

impl BBox {
    pub fn new(u: f64, v: f64, w: f64, h: f64) -> Result<Self> {
        if !(u.is_finite() && v.is_finite()) {
            return Err(Error::InvalidBox(format!("non-finite corner ({u}, {v})")));
        }
        if !(w.is_finite() && h.is_finite() && w > 0.0 && h > 0.0) {
            return Err(Error::InvalidBox(format!("non-positive size {w}x{h}")));
        }
        Ok(Self { u, v, w, h })
    }

    pub fn from_center(cx: f64, cy: f64, w: f64, h: f64) -> Result<Self> {
        Self::new(cx - w / 2.0, cy - h / 2.0, w, h)
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn right(&self) -> f64 {
        self.u + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.v + self.h
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn center(&self) -> (f64, f64) {
        (self.u + self.w / 2.0, self.v + self.h / 2.0)
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Result<Self> {
        Self::new(self.u + dx, self.v + dy, self.w, self.h)
    }

    pub fn intersection_area(&self, other: &BBox) -> f64 {
        let iw = self.right().min(other.right()) - self.u.max(other.u);
        let ih = self.bottom().min(other.bottom()) - self.v.max(other.v);
        if iw <= 0.0 || ih <= 0.0 {
            0.0
        } else {
            iw * ih
        }
    }
}

/// Intersection over union on continuous coordinates.
pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let inter = a.intersection_area(b);
    if inter == 0.0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}

pub const CHANNELS: usize = 3;

/// Row-major RGB raster with intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    width: u32,
    height: u32,
    data: Vec<f64>,
}

impl Raster {
    pub fn new(width: u32, height: u32, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidRaster(format!("zero dimension {width}x{height}")));
        }
        let expected = width as usize * height as usize * CHANNELS;
        if data.len() != expected {
            return Err(Error::InvalidRaster(format!("expected {expected} samples, got {}", data.len())));
        }
        if let Some(bad) = data.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidRaster(format!("intensity {bad} outside [0, 1]")));
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: u32, height: u32, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width as usize * height as usize * CHANNELS])
    }

    /// Builds a raster by evaluating `f(x, y, channel)` at every sample.
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width as usize * height as usize * CHANNELS);
        for y in 0..height {
            for x in 0..width {
                for c in 0..CHANNELS {
                    data.push(f(x, y, c));
                }
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, x: u32, y: u32, c: usize) -> f64 {
        self.data[(y as usize * self.width as usize + x as usize) * CHANNELS + c]
    }

    /// Bilinear sample at continuous pixel coordinates, where integer
    /// coordinates are pixel centers. Coordinates outside the raster clamp
    /// to the nearest edge pixel.
    pub fn sample_bilinear(&self, x: f64, y: f64, c: usize) -> f64 {
        let max_x = (self.width - 1) as f64;
        let max_y = (self.height - 1) as f64;
        let x = x.clamp(0.0, max_x);
        let y = y.clamp(0.0, max_y);
        let x0 = x.floor();
        let y0 = y.floor();
        let fx = x - x0;
        let fy = y - y0;
        let x0 = x0 as u32;
        let y0 = y0 as u32;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let top = self.get(x0, y0, c) * (1.0 - fx) + self.get(x1, y0, c) * fx;
        let bottom = self.get(x0, y1, c) * (1.0 - fx) + self.get(x1, y1, c) * fx;
        (top * (1.0 - fy) + bottom * fy).clamp(0.0, 1.0)
    }
}

/// Extracts the region under `bbox` and resamples it to `out_w x out_h`
/// with bilinear interpolation.
///
/// Output pixel centers are spread uniformly over the box, so a box covering
/// the whole image resized to the image's own size is the identity. Parts of
/// the box outside the image read the nearest edge pixel.
pub fn crop_and_resize(image: &Raster, bbox: &BBox, out_w: u32, out_h: u32) -> Result<Raster> {
    if out_w == 0 || out_h == 0 {
        return Err(Error::InvalidRaster(format!("zero output size {out_w}x{out_h}")));
    }
    let bounds = BBox::new(0.0, 0.0, image.width() as f64, image.height() as f64)?;
    if bbox.intersection_area(&bounds) <= 0.0 {
        return Err(Error::EmptyCrop);
    }
    let sx = bbox.w() / out_w as f64;
    let sy = bbox.h() / out_h as f64;
    Raster::from_fn(out_w, out_h, |x, y, c| {
        let src_x = bbox.u() + (x as f64 + 0.5) * sx - 0.5;
        let src_y = bbox.v() + (y as f64 + 0.5) * sy - 0.5;
        image.sample_bilinear(src_x, src_y, c)
    })
}
