use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::transform::{apply_map, GamutMap};
use super::{GamutBoundary, GamutError};
use crate::colorspace::{lab_lch, lab_to_rgb, rgb_to_lab_trusted, LabColor, D65};
use crate::io::RasterImage;

const PIXEL_CHUNK: usize = 4096;

/// Lab value of every pixel in row-major order.
pub fn image_lab_points(image: &RasterImage) -> Vec<LabColor> {
    image
        .pixels()
        .par_iter()
        .with_min_len(PIXEL_CHUNK)
        .map(|p| rgb_to_lab_trusted(*p))
        .collect()
}

/// Maps every pixel through Lab and back; colors leaving sRGB are clamped.
pub fn map_image(image: &RasterImage, m: &GamutMap) -> RasterImage {
    let pixels = image
        .pixels()
        .par_iter()
        .with_min_len(PIXEL_CHUNK)
        .map(|p| lab_to_rgb(apply_map(m, rgb_to_lab_trusted(*p)), D65).0)
        .collect();
    RasterImage::from_trusted(image.width(), image.height(), pixels)
}

/// Row-major out-of-gamut flags, one per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OogMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

/// Run-length form of an [`OogMask`].
///
/// `runs` alternate between clear and set pixels in row-major order and
/// always start with a clear run, which is 0 when the first pixel is set.
/// The runs sum to `width * height`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RleMask {
    pub width: usize,
    pub height: usize,
    pub runs: Vec<usize>,
}

impl OogMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self, GamutError> {
        if bits.len() != width * height {
            return Err(GamutError::MaskSize {
                width,
                height,
                bits: bits.len(),
                expected: width * height,
            });
        }
        Ok(OogMask {
            width,
            height,
            bits,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn density(&self) -> f64 {
        if self.bits.is_empty() {
            0.0
        } else {
            self.count() as f64 / self.bits.len() as f64
        }
    }

    pub fn to_rle(&self) -> RleMask {
        let mut runs = Vec::new();
        let mut current = false;
        let mut len = 0;
        for &bit in &self.bits {
            if bit != current {
                runs.push(len);
                current = bit;
                len = 0;
            }
            len += 1;
        }
        runs.push(len);
        RleMask {
            width: self.width,
            height: self.height,
            runs,
        }
    }

    pub fn from_rle(rle: &RleMask) -> Result<Self, GamutError> {
        let mut bits = Vec::with_capacity(rle.width * rle.height);
        for (i, &run) in rle.runs.iter().enumerate() {
            if bits.len() + run > rle.width * rle.height {
                break;
            }
            bits.extend(std::iter::repeat_n(i % 2 == 1, run));
        }
        let total: usize = rle.runs.iter().sum();
        if total != rle.width * rle.height {
            return Err(GamutError::MaskSize {
                width: rle.width,
                height: rle.height,
                bits: total,
                expected: rle.width * rle.height,
            });
        }
        OogMask::new(rle.width, rle.height, bits)
    }
}

pub fn oog_mask(image: &RasterImage, bd: &GamutBoundary) -> OogMask {
    oog_mask_of_points(image.width(), image.height(), &image_lab_points(image), bd)
}

/// Mask for precomputed row-major Lab values, such as mapped pixels.
pub fn oog_mask_of_points(
    width: usize,
    height: usize,
    points: &[LabColor],
    bd: &GamutBoundary,
) -> OogMask {
    debug_assert_eq!(points.len(), width * height);
    let bits = points
        .par_iter()
        .with_min_len(PIXEL_CHUNK)
        .map(|p| !bd.contains(*p))
        .collect();
    OogMask {
        width,
        height,
        bits,
    }
}

/// Inclusive LCh ranges. The hue range runs counterclockwise from `h.0`
/// to `h.1` and wraps through 0 when `h.0 > h.1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LchRegion {
    pub l: (f64, f64),
    pub c: (f64, f64),
    pub h: (f64, f64),
}

impl LchRegion {
    /// The lightness band and hue sector of a boundary cell, at any chroma.
    pub fn for_cell(bd: &GamutBoundary, sector: usize, band: usize) -> Self {
        LchRegion {
            l: bd.band_lightness(band),
            c: (0.0, f64::MAX),
            h: bd.sector_hues(sector),
        }
    }

    pub fn contains(&self, p: LabColor) -> bool {
        let lch = lab_lch(p);
        let within = |v: f64, (lo, hi): (f64, f64)| lo <= v && v <= hi;
        let (h0, h1) = (self.h.0.rem_euclid(360.0), self.h.1.rem_euclid(360.0));
        let in_hue = if self.h.1 - self.h.0 >= 360.0 {
            true
        } else if h0 <= h1 {
            within(lch.h, (h0, h1))
        } else {
            lch.h >= h0 || lch.h <= h1
        };
        in_hue && within(lch.l, self.l) && within(lch.c, self.c)
    }
}

/// `(x, y)` of every pixel whose LCh value lies in `region`, row-major.
pub fn pixels_for_region(image: &RasterImage, region: &LchRegion) -> Vec<(usize, usize)> {
    let w = image.width();
    image
        .pixels()
        .par_iter()
        .with_min_len(PIXEL_CHUNK)
        .enumerate()
        .filter(|(_, p)| region.contains(rgb_to_lab_trusted(**p)))
        .map(|(i, _)| (i % w, i / w))
        .collect()
}
