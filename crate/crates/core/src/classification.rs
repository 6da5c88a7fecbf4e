//! L* histograms and high/normal/low key classification.
//!
//! Class borders: low key `[0, 40]`, normal key `(40, 60]`, high key
//! `(60, 100]`. Histogram bins follow the same endpoint rule, so bin `i` of
//! `n` covers `(100 i / n, 100 (i + 1) / n]` and bin 0 also holds `L* = 0`.
//! With a step count that is a multiple of 5 every class border is a bin
//! edge.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colorspace::{rgb_to_lab_trusted, SeparationParams};
use crate::io::RasterImage;

pub const DEFAULT_STEP_COUNT: usize = 10;
pub const MIN_STEP_COUNT: usize = 3;

/// Lightness above which a dominant bin is treated as paper or studio
/// background.
pub const BACKGROUND_LSTAR: f64 = 95.0;
/// Share of all pixels a background bin must exceed to be dropped.
pub const BACKGROUND_SHARE: f64 = 0.3;

// L* values this close (in bin units) above a bin edge are snapped onto it.
const EDGE_SNAP: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("step count must be at least {MIN_STEP_COUNT}, got {0}")]
    TooFewSteps(usize),
    #[error("histogram is empty")]
    Empty,
    #[error("unknown image key class {0:?}, expected high-key, normal-key or low-key")]
    UnknownClass(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImageKeyClass {
    HighKey,
    NormalKey,
    LowKey,
}

impl ImageKeyClass {
    pub const ALL: [ImageKeyClass; 3] = [
        ImageKeyClass::LowKey,
        ImageKeyClass::NormalKey,
        ImageKeyClass::HighKey,
    ];

    /// `(lower, upper)` border of the class. The lower bound is exclusive
    /// except for low key, which includes `L* = 0`.
    pub fn lstar_range(self) -> (f64, f64) {
        match self {
            ImageKeyClass::LowKey => (0.0, 40.0),
            ImageKeyClass::NormalKey => (40.0, 60.0),
            ImageKeyClass::HighKey => (60.0, 100.0),
        }
    }

    pub fn contains(self, lstar: f64) -> bool {
        let (lo, hi) = self.lstar_range();
        let above = if self == ImageKeyClass::LowKey {
            lstar >= lo
        } else {
            lstar > lo
        };
        above && lstar <= hi
    }

    pub fn for_lstar(lstar: f64) -> Self {
        if lstar > 60.0 {
            ImageKeyClass::HighKey
        } else if lstar > 40.0 {
            ImageKeyClass::NormalKey
        } else {
            ImageKeyClass::LowKey
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ImageKeyClass::HighKey => "high-key",
            ImageKeyClass::NormalKey => "normal-key",
            ImageKeyClass::LowKey => "low-key",
        }
    }
}

impl fmt::Display for ImageKeyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ImageKeyClass {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['_', ' '], "-").as_str() {
            "high-key" | "high" | "highkey" => Ok(ImageKeyClass::HighKey),
            "normal-key" | "normal" | "normalkey" => Ok(ImageKeyClass::NormalKey),
            "low-key" | "low" | "lowkey" => Ok(ImageKeyClass::LowKey),
            _ => Err(ClassifyError::UnknownClass(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LStarHistogram {
    step_count: usize,
    counts: Vec<u64>,
    total_pixels: u64,
}

impl LStarHistogram {
    pub fn from_counts(counts: Vec<u64>) -> Result<Self, ClassifyError> {
        if counts.len() < MIN_STEP_COUNT {
            return Err(ClassifyError::TooFewSteps(counts.len()));
        }
        let total_pixels: u64 = counts.iter().sum();
        if total_pixels == 0 {
            return Err(ClassifyError::Empty);
        }
        Ok(LStarHistogram {
            step_count: counts.len(),
            counts,
            total_pixels,
        })
    }

    /// Bins arbitrary L* values; values outside `[0, 100]` land in the end
    /// bins.
    pub fn from_lstar<I: IntoIterator<Item = f64>>(
        values: I,
        step_count: usize,
    ) -> Result<Self, ClassifyError> {
        if step_count < MIN_STEP_COUNT {
            return Err(ClassifyError::TooFewSteps(step_count));
        }
        let mut counts = vec![0u64; step_count];
        for l in values {
            counts[bin_index(l, step_count)] += 1;
        }
        Self::from_counts(counts)
    }

    pub fn step_count(&self) -> usize {
        self.step_count
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total_pixels(&self) -> u64 {
        self.total_pixels
    }

    /// `(lower, upper)` L* edges of a bin.
    pub fn bin_edges(&self, bin: usize) -> (f64, f64) {
        let n = self.step_count as f64;
        (100.0 * bin as f64 / n, 100.0 * (bin + 1) as f64 / n)
    }
}

pub fn bin_index(lstar: f64, step_count: usize) -> usize {
    let scaled = lstar.clamp(0.0, 100.0) * step_count as f64 / 100.0;
    let upper = (scaled - EDGE_SNAP).ceil();
    (upper.max(1.0) as usize - 1).min(step_count - 1)
}

pub fn lstar_histogram(
    image: &RasterImage,
    step_count: usize,
) -> Result<LStarHistogram, ClassifyError> {
    if step_count < MIN_STEP_COUNT {
        return Err(ClassifyError::TooFewSteps(step_count));
    }
    let counts = image
        .pixels()
        .par_chunks(image.width())
        .fold(
            || vec![0u64; step_count],
            |mut acc, row| {
                for &p in row {
                    acc[bin_index(rgb_to_lab_trusted(p).l, step_count)] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; step_count],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    LStarHistogram::from_counts(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KeyMassReport {
    pub high_mass: f64,
    pub normal_mass: f64,
    pub low_mass: f64,
    pub chosen: ImageKeyClass,
    /// Bin dropped as background, if any.
    pub excluded_bin: Option<usize>,
}

fn background_bin(hist: &LStarHistogram) -> Option<usize> {
    let (bin, count) = (0..hist.step_count)
        .filter(|&i| hist.bin_edges(i).1 > BACKGROUND_LSTAR)
        .map(|i| (i, hist.counts[i]))
        .max_by_key(|&(i, c)| (c, i))?;
    let share = count as f64 / hist.total_pixels as f64;
    // an image that is nothing but background keeps its only bin
    (share > BACKGROUND_SHARE && count < hist.total_pixels).then_some(bin)
}

pub fn classify_key(hist: &LStarHistogram, exclude_background_peak: bool) -> KeyMassReport {
    let excluded_bin = if exclude_background_peak {
        background_bin(hist)
    } else {
        None
    };
    let mut mass = [0.0f64; 3];
    let mut total = 0.0;
    for (bin, &count) in hist.counts.iter().enumerate() {
        if Some(bin) == excluded_bin || count == 0 {
            continue;
        }
        let (lo, hi) = hist.bin_edges(bin);
        let count = count as f64;
        total += count;
        for (slot, class) in mass.iter_mut().zip(ImageKeyClass::ALL) {
            let (a, b) = class.lstar_range();
            let overlap = (hi.min(b) - lo.max(a)).max(0.0);
            *slot += count * overlap / (hi - lo);
        }
    }
    let [low, normal, high] = mass.map(|m| m / total);
    let max = low.max(normal).max(high);
    let winners: Vec<_> = [
        (ImageKeyClass::LowKey, low),
        (ImageKeyClass::NormalKey, normal),
        (ImageKeyClass::HighKey, high),
    ]
    .into_iter()
    .filter(|&(_, m)| m == max)
    .collect();
    let chosen = match winners.as_slice() {
        [(only, _)] => *only,
        _ => ImageKeyClass::NormalKey,
    };
    KeyMassReport {
        high_mass: high,
        normal_mass: normal,
        low_mass: low,
        chosen,
        excluded_bin,
    }
}

/// Separation presets per image class. These are house defaults, tuned
/// toward heavier black generation for dark images.
///
/// | class      | GCR | black start | black width | TIC |
/// |------------|-----|-------------|-------------|-----|
/// | low key    | 0.9 | 0.1         | 0.7         | 3.0 |
/// | normal key | 0.7 | 0.2         | 0.6         | 3.2 |
/// | high key   | 0.5 | 0.3         | 0.5         | 3.4 |
pub fn recommend_separation(class: ImageKeyClass) -> SeparationParams {
    let (gcr_strength, black_start, black_width, total_ink_limit) = match class {
        ImageKeyClass::LowKey => (0.9, 0.1, 0.7, 3.0),
        ImageKeyClass::NormalKey => (0.7, 0.2, 0.6, 3.2),
        ImageKeyClass::HighKey => (0.5, 0.3, 0.5, 3.4),
    };
    SeparationParams {
        gcr_strength,
        black_start,
        black_width,
        total_ink_limit,
    }
}
