//! Test chart layouts, IT8 scanner targets, chart rendering and device
//! characterization from chart measurements.
//!
//! Layouts serialize as
//!
//! ```json
//! { "rows": 12, "cols": 22, "keyClass": null,
//!   "patches": [ { "row": 0, "col": 0, "role": "standardized",
//!                  "target": { "l": 25.0, "a": 8.1, "b": 0.0 } } ] }
//! ```
//!
//! with `role` one of `standardized`, `tone-scale`, `vendor`, `custom`,
//! `neutral-ramp` and `keyClass` one of `high-key`, `normal-key`,
//! `low-key` or `null`. Patches are listed in row-major order.

mod adapted;
mod characterize;
mod it8;

pub use adapted::{generate_adapted_chart, MIN_ADAPTED_PATCHES, MIN_RAMP_LEN};
pub use characterize::{
    characterize_device, profile_eval, profile_gamut_points, DeviceProfile, Measurement,
    MeasurementSet, ProfileError, MIN_MEASUREMENTS,
};
pub use it8::{
    build_it8_target, customize_target, It8Target, IT8_COLS, IT8_LIGHTNESS_LEVELS, IT8_ROWS,
    STANDARDIZED_COLS, TONE_SCALES, TONE_SCALE_COLS, VENDOR_COLS, VENDOR_SLOTS,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classification::ImageKeyClass;
use crate::colorspace::{lab_in_srgb_gamut, lab_to_rgb, lch_lab, LabColor, LchColor, D65};
use crate::io::RasterImage;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChartError {
    #[error("a {rows}x{cols} chart holds {} patches, at least {min} are needed", rows * cols)]
    TooSmall {
        rows: usize,
        cols: usize,
        min: usize,
    },
    #[error("{count} patches do not fit into {capacity} slots")]
    Capacity { count: usize, capacity: usize },
    #[error("patch target L* = {0} is outside [0, 100]")]
    LightnessOutOfRange(f64),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("patch size must be at least one pixel")]
    ZeroPatchSize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatchRole {
    Standardized,
    ToneScale,
    Vendor,
    Custom,
    NeutralRamp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Patch {
    pub row: usize,
    pub col: usize,
    pub target: LabColor,
    pub role: PatchRole,
}

fn check_lightness(target: &LabColor) -> Result<(), ChartError> {
    if (0.0..=100.0).contains(&target.l) && target.a.is_finite() && target.b.is_finite() {
        Ok(())
    } else {
        Err(ChartError::LightnessOutOfRange(target.l))
    }
}

/// A fully populated grid of patches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", try_from = "RawLayout")]
pub struct TestChartLayout {
    rows: usize,
    cols: usize,
    key_class: Option<ImageKeyClass>,
    patches: Vec<Patch>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawLayout {
    rows: usize,
    cols: usize,
    #[serde(default)]
    key_class: Option<ImageKeyClass>,
    patches: Vec<Patch>,
}

impl TryFrom<RawLayout> for TestChartLayout {
    type Error = ChartError;

    fn try_from(raw: RawLayout) -> Result<Self, Self::Error> {
        TestChartLayout::new(raw.rows, raw.cols, raw.patches, raw.key_class)
    }
}

impl TestChartLayout {
    /// Validates the grid and sorts the patches into row-major order.
    pub fn new(
        rows: usize,
        cols: usize,
        mut patches: Vec<Patch>,
        key_class: Option<ImageKeyClass>,
    ) -> Result<Self, ChartError> {
        if rows == 0 || cols == 0 {
            return Err(ChartError::InvalidLayout(format!(
                "grid must be nonempty, got {rows}x{cols}"
            )));
        }
        if patches.len() != rows * cols {
            return Err(ChartError::InvalidLayout(format!(
                "{rows}x{cols} grid needs {} patches, got {}",
                rows * cols,
                patches.len()
            )));
        }
        let mut seen = vec![false; rows * cols];
        for p in &patches {
            if p.row >= rows || p.col >= cols {
                return Err(ChartError::InvalidLayout(format!(
                    "patch ({}, {}) lies outside the {rows}x{cols} grid",
                    p.row, p.col
                )));
            }
            let slot = &mut seen[p.row * cols + p.col];
            if *slot {
                return Err(ChartError::InvalidLayout(format!(
                    "duplicate patch at ({}, {})",
                    p.row, p.col
                )));
            }
            *slot = true;
            check_lightness(&p.target)?;
        }
        patches.sort_by_key(|p| (p.row, p.col));
        Ok(TestChartLayout {
            rows,
            cols,
            key_class,
            patches,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn key_class(&self) -> Option<ImageKeyClass> {
        self.key_class
    }

    pub fn patches(&self) -> &[Patch] {
        &self.patches
    }

    pub fn patch(&self, row: usize, col: usize) -> &Patch {
        &self.patches[row * self.cols + col]
    }

    pub fn count_role(&self, role: PatchRole) -> usize {
        self.patches.iter().filter(|p| p.role == role).count()
    }
}

/// Largest chroma at `(lightness, hue)` that stays inside the sRGB gamut,
/// found by bisection.
pub fn srgb_max_chroma(lightness: f64, hue: f64) -> f64 {
    let inside = |c: f64| lab_in_srgb_gamut(lch_lab(LchColor::new(lightness, c, hue)));
    if !inside(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 200.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderedChart {
    pub image: RasterImage,
    /// `(row, col)` of every patch whose target had to be clamped into sRGB.
    pub clamped: Vec<(usize, usize)>,
}

pub fn render_chart(layout: &TestChartLayout, patch_px: usize) -> Result<RenderedChart, ChartError> {
    if patch_px == 0 {
        return Err(ChartError::ZeroPatchSize);
    }
    let width = layout.cols * patch_px;
    let height = layout.rows * patch_px;
    let mut pixels = vec![Default::default(); width * height];
    let mut clamped = Vec::new();
    for p in layout.patches() {
        let (rgb, in_gamut) = lab_to_rgb(p.target, D65);
        if !in_gamut {
            clamped.push((p.row, p.col));
        }
        for y in p.row * patch_px..(p.row + 1) * patch_px {
            let start = y * width + p.col * patch_px;
            pixels[start..start + patch_px].fill(rgb);
        }
    }
    Ok(RenderedChart {
        image: RasterImage::from_trusted(width, height, pixels),
        clamped,
    })
}
