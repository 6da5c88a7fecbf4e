//! IT8-style scanner targets.
//!
//! 12 rows by 22 columns:
//!
//! * columns 0-11: standardized patches. Row `r` holds hue `30 r` degrees;
//!   column `4 i + j` holds lightness level `i` (L* 25, 50, 75) at chroma
//!   `(j + 1) / 4` of the sRGB maximum for that hue and lightness.
//! * columns 12-18: one tone scale per column (cyan, magenta, yellow, red,
//!   green, blue, neutral), twelve steps running down the rows. Chromatic
//!   scales keep the hue of their sRGB primary or secondary at L* 50 and
//!   climb to its maximum chroma; the neutral scale climbs in lightness.
//! * columns 19-21: 36 vendor slots, filled row-major.

use std::sync::LazyLock;

use super::{check_lightness, srgb_max_chroma, ChartError, Patch, PatchRole, TestChartLayout};
use crate::colorspace::{lab_lch, lch_lab, rgb_to_lab_trusted, LabColor, LchColor, RgbColor};

pub const IT8_ROWS: usize = 12;
pub const IT8_COLS: usize = 22;
pub const STANDARDIZED_COLS: std::ops::Range<usize> = 0..12;
pub const TONE_SCALE_COLS: std::ops::Range<usize> = 12..19;
pub const VENDOR_COLS: std::ops::Range<usize> = 19..22;
pub const VENDOR_SLOTS: usize = 36;
pub const IT8_LIGHTNESS_LEVELS: [f64; 3] = [25.0, 50.0, 75.0];

const HUE_COUNT: usize = 12;
const CHROMA_STEPS: usize = 4;
const TONE_STEPS: usize = 12;
const TONE_SCALE_LIGHTNESS: f64 = 50.0;
const VENDOR_FILL: LabColor = LabColor::new(50.0, 0.0, 0.0);

/// Tone scale names in column order.
pub const TONE_SCALES: [&str; 7] = ["cyan", "magenta", "yellow", "red", "green", "blue", "neutral"];

const TONE_SCALE_SOURCES: [[f64; 3]; 6] = [
    [0.0, 1.0, 1.0],
    [1.0, 0.0, 1.0],
    [1.0, 1.0, 0.0],
    [1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0],
];

static TONE_SCALE_ENDPOINTS: LazyLock<[LchColor; 6]> = LazyLock::new(|| {
    TONE_SCALE_SOURCES.map(|[r, g, b]| {
        let hue = lab_lch(rgb_to_lab_trusted(RgbColor { r, g, b })).h;
        LchColor::new(
            TONE_SCALE_LIGHTNESS,
            srgb_max_chroma(TONE_SCALE_LIGHTNESS, hue),
            hue,
        )
    })
});

fn vendor_slot(k: usize) -> (usize, usize) {
    (k / VENDOR_COLS.len(), VENDOR_COLS.start + k % VENDOR_COLS.len())
}

fn tone_scale_step(scale: usize, step: usize) -> LabColor {
    let t = (step + 1) as f64 / TONE_STEPS as f64;
    if scale == 6 {
        let l = 5.0 + 90.0 * step as f64 / (TONE_STEPS - 1) as f64;
        return LabColor::new(l, 0.0, 0.0);
    }
    let end = TONE_SCALE_ENDPOINTS[scale];
    lch_lab(LchColor::new(end.l, t * end.c, end.h))
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(transparent)]
pub struct It8Target(TestChartLayout);

impl It8Target {
    /// Checks the 12x22 block structure of an arbitrary layout.
    pub fn from_layout(layout: TestChartLayout) -> Result<Self, ChartError> {
        if layout.rows() != IT8_ROWS || layout.cols() != IT8_COLS {
            return Err(ChartError::InvalidLayout(format!(
                "IT8 targets are {IT8_ROWS}x{IT8_COLS}, got {}x{}",
                layout.rows(),
                layout.cols()
            )));
        }
        for p in layout.patches() {
            let ok = match p.col {
                c if STANDARDIZED_COLS.contains(&c) => p.role == PatchRole::Standardized,
                c if TONE_SCALE_COLS.contains(&c) => p.role == PatchRole::ToneScale,
                _ => matches!(p.role, PatchRole::Vendor | PatchRole::Custom),
            };
            if !ok {
                return Err(ChartError::InvalidLayout(format!(
                    "patch ({}, {}) has role {:?}, which does not belong in its column block",
                    p.row, p.col, p.role
                )));
            }
        }
        Ok(It8Target(layout))
    }

    pub fn layout(&self) -> &TestChartLayout {
        &self.0
    }

    pub fn into_layout(self) -> TestChartLayout {
        self.0
    }

    /// Patches of one tone scale, lowest step first.
    pub fn tone_scale(&self, scale: usize) -> Vec<&Patch> {
        (0..IT8_ROWS)
            .map(|row| self.0.patch(row, TONE_SCALE_COLS.start + scale))
            .collect()
    }

    /// Vendor-block patches in slot order.
    pub fn vendor_block(&self) -> Vec<&Patch> {
        (0..VENDOR_SLOTS)
            .map(|k| {
                let (row, col) = vendor_slot(k);
                self.0.patch(row, col)
            })
            .collect()
    }
}

pub fn build_it8_target(vendor: &[LabColor]) -> Result<It8Target, ChartError> {
    if vendor.len() > VENDOR_SLOTS {
        return Err(ChartError::Capacity {
            count: vendor.len(),
            capacity: VENDOR_SLOTS,
        });
    }
    vendor.iter().try_for_each(check_lightness)?;

    let mut patches = Vec::with_capacity(IT8_ROWS * IT8_COLS);
    for hue_idx in 0..HUE_COUNT {
        let hue = 30.0 * hue_idx as f64;
        for (level, &l) in IT8_LIGHTNESS_LEVELS.iter().enumerate() {
            let max = srgb_max_chroma(l, hue);
            for step in 0..CHROMA_STEPS {
                let c = max * (step + 1) as f64 / CHROMA_STEPS as f64;
                patches.push(Patch {
                    row: hue_idx,
                    col: level * CHROMA_STEPS + step,
                    target: lch_lab(LchColor::new(l, c, hue)),
                    role: PatchRole::Standardized,
                });
            }
        }
    }
    for scale in 0..TONE_SCALES.len() {
        for step in 0..TONE_STEPS {
            patches.push(Patch {
                row: step,
                col: TONE_SCALE_COLS.start + scale,
                target: tone_scale_step(scale, step),
                role: PatchRole::ToneScale,
            });
        }
    }
    for k in 0..VENDOR_SLOTS {
        let (row, col) = vendor_slot(k);
        patches.push(Patch {
            row,
            col,
            target: vendor.get(k).copied().unwrap_or(VENDOR_FILL),
            role: PatchRole::Vendor,
        });
    }
    It8Target::from_layout(TestChartLayout::new(IT8_ROWS, IT8_COLS, patches, None)?)
}

/// Puts custom patches into the vendor block, row-major from the first
/// slot. Applying the same list twice gives the same target.
pub fn customize_target(target: &It8Target, custom: &[LabColor]) -> Result<It8Target, ChartError> {
    if custom.len() > VENDOR_SLOTS {
        return Err(ChartError::Capacity {
            count: custom.len(),
            capacity: VENDOR_SLOTS,
        });
    }
    custom.iter().try_for_each(check_lightness)?;
    let mut layout = target.0.clone();
    for (k, &lab) in custom.iter().enumerate() {
        let (row, col) = vendor_slot(k);
        let idx = row * IT8_COLS + col;
        layout.patches[idx].target = lab;
        layout.patches[idx].role = PatchRole::Custom;
    }
    Ok(It8Target(layout))
}
