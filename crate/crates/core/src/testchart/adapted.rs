//! Image-adapted test charts: patches concentrated in the L* range of one
//! image class.
//!
//! The chart opens with a neutral ramp filling its first row(s), running
//! from the top of the class range downward in even steps. The remaining
//! patches cycle through six hues 60° apart at half and full sRGB maximum
//! chroma, on lightness levels spread evenly inside the class range.

use super::{srgb_max_chroma, ChartError, Patch, PatchRole, TestChartLayout};
use crate::classification::ImageKeyClass;
use crate::colorspace::{lch_lab, LabColor, LchColor};

pub const MIN_ADAPTED_PATCHES: usize = 12;
pub const MIN_RAMP_LEN: usize = 6;

const HUE_STEP: f64 = 60.0;
const CHROMA_FRACTIONS: [f64; 2] = [0.5, 1.0];

fn ramp_len(rows: usize, cols: usize) -> usize {
    let whole_rows = cols * MIN_RAMP_LEN.div_ceil(cols);
    whole_rows.min(MIN_RAMP_LEN.max(rows * cols / 2))
}

pub fn generate_adapted_chart(
    class: ImageKeyClass,
    rows: usize,
    cols: usize,
) -> Result<TestChartLayout, ChartError> {
    if rows.saturating_mul(cols) < MIN_ADAPTED_PATCHES {
        return Err(ChartError::TooSmall {
            rows,
            cols,
            min: MIN_ADAPTED_PATCHES,
        });
    }
    let total = rows * cols;
    let (lo, hi) = class.lstar_range();
    let span = hi - lo;
    let ramp = ramp_len(rows, cols);
    let colored = total - ramp;
    let levels = colored.div_ceil(6 * CHROMA_FRACTIONS.len()).max(1);

    let patches = (0..total)
        .map(|i| {
            let (target, role) = if i < ramp {
                let l = hi - span * i as f64 / ramp as f64;
                (LabColor::new(l, 0.0, 0.0), PatchRole::NeutralRamp)
            } else {
                let j = i - ramp;
                let hue = HUE_STEP * (j % 6) as f64;
                let fraction = CHROMA_FRACTIONS[(j / 6) % 2];
                let level = j / 12;
                let l = lo + span * (level as f64 + 0.5) / levels as f64;
                let chroma = fraction * srgb_max_chroma(l, hue);
                (lch_lab(LchColor::new(l, chroma, hue)), PatchRole::Custom)
            };
            Patch {
                row: i / cols,
                col: i % cols,
                target,
                role,
            }
        })
        .collect();
    TestChartLayout::new(rows, cols, patches, Some(class))
}
