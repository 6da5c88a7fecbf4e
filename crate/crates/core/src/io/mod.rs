//! Raster images and the file formats the toolkit reads and writes.

mod cgats;
mod ppm;

pub use cgats::{parse_cgats, CgatsError};
pub use ppm::{read_ppm, write_ppm, PpmError};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colorspace::{ColorError, RgbColor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImageError {
    #[error("image dimensions must be positive, got {width}x{height}")]
    EmptyImage { width: usize, height: usize },
    #[error("expected {expected} pixels for the given dimensions, got {actual}")]
    PixelCount { expected: usize, actual: usize },
    #[error("pixel {index}: {source}")]
    Pixel { index: usize, source: ColorError },
}

/// Row-major sRGB image. Every pixel is validated on construction, so the
/// channels of a `RasterImage` are always in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawImage")]
pub struct RasterImage {
    width: usize,
    height: usize,
    pixels: Vec<RgbColor>,
}

#[derive(Deserialize)]
struct RawImage {
    width: usize,
    height: usize,
    pixels: Vec<RgbColor>,
}

impl TryFrom<RawImage> for RasterImage {
    type Error = ImageError;

    fn try_from(raw: RawImage) -> Result<Self, Self::Error> {
        RasterImage::new(raw.width, raw.height, raw.pixels)
    }
}

impl RasterImage {
    pub fn new(width: usize, height: usize, pixels: Vec<RgbColor>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyImage { width, height });
        }
        let expected = width * height;
        if pixels.len() != expected {
            return Err(ImageError::PixelCount {
                expected,
                actual: pixels.len(),
            });
        }
        for (index, p) in pixels.iter().enumerate() {
            p.validate()
                .map_err(|source| ImageError::Pixel { index, source })?;
        }
        Ok(RasterImage {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, color: RgbColor) -> Result<Self, ImageError> {
        Self::new(width, height, vec![color; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[RgbColor] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> RgbColor {
        self.pixels[y * self.width + x]
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    /// Builds an image from already-valid pixels produced inside the crate.
    pub(crate) fn from_trusted(width: usize, height: usize, pixels: Vec<RgbColor>) -> Self {
        debug_assert_eq!(pixels.len(), width * height);
        RasterImage {
            width,
            height,
            pixels,
        }
    }
}
