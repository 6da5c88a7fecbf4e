use serde::{Deserialize, Serialize};

use super::GamutError;
use crate::colorspace::{lab_lch, LabColor};

pub const DEFAULT_SECTORS: usize = 36;
pub const DEFAULT_BANDS: usize = 18;
pub const MIN_SECTORS: usize = 4;
pub const MIN_BANDS: usize = 3;

/// Segment-maxima gamut boundary.
///
/// `max_chroma` and `interpolated` are stored sector-major: the cell of
/// hue sector `s` and lightness band `b` sits at index `s * B + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", try_from = "RawBoundary")]
pub struct GamutBoundary {
    hue_sectors: usize,
    lightness_bands: usize,
    max_chroma: Vec<f64>,
    interpolated: Vec<bool>,
    l_min: f64,
    l_max: f64,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawBoundary {
    hue_sectors: usize,
    lightness_bands: usize,
    max_chroma: Vec<f64>,
    interpolated: Vec<bool>,
    l_min: f64,
    l_max: f64,
}

impl TryFrom<RawBoundary> for GamutBoundary {
    type Error = GamutError;

    fn try_from(r: RawBoundary) -> Result<Self, Self::Error> {
        GamutBoundary::new(
            r.hue_sectors,
            r.lightness_bands,
            r.max_chroma,
            r.interpolated,
            r.l_min,
            r.l_max,
        )
    }
}

fn check_dims(h: usize, b: usize) -> Result<(), GamutError> {
    if h < MIN_SECTORS {
        return Err(GamutError::TooFewSectors {
            got: h,
            min: MIN_SECTORS,
        });
    }
    if b < MIN_BANDS {
        return Err(GamutError::TooFewBands {
            got: b,
            min: MIN_BANDS,
        });
    }
    Ok(())
}

impl GamutBoundary {
    pub fn new(
        hue_sectors: usize,
        lightness_bands: usize,
        max_chroma: Vec<f64>,
        interpolated: Vec<bool>,
        l_min: f64,
        l_max: f64,
    ) -> Result<Self, GamutError> {
        check_dims(hue_sectors, lightness_bands)?;
        let cells = hue_sectors * lightness_bands;
        if max_chroma.len() != cells || interpolated.len() != cells {
            return Err(GamutError::InvalidBoundary(format!(
                "{hue_sectors}x{lightness_bands} grid needs {cells} cells, got {} chroma values and {} flags",
                max_chroma.len(),
                interpolated.len()
            )));
        }
        if let Some(c) = max_chroma.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
            return Err(GamutError::InvalidBoundary(format!(
                "maximum chroma {c} is negative or not finite"
            )));
        }
        if !(l_min.is_finite() && l_max.is_finite() && l_min <= l_max) {
            return Err(GamutError::InvalidBoundary(format!(
                "lightness range [{l_min}, {l_max}] is empty or not finite"
            )));
        }
        Ok(GamutBoundary {
            hue_sectors,
            lightness_bands,
            max_chroma,
            interpolated,
            l_min,
            l_max,
        })
    }

    /// A boundary with the same maximum chroma in every cell.
    pub fn uniform(
        hue_sectors: usize,
        lightness_bands: usize,
        chroma: f64,
        l_min: f64,
        l_max: f64,
    ) -> Result<Self, GamutError> {
        let cells = hue_sectors.saturating_mul(lightness_bands);
        Self::new(
            hue_sectors,
            lightness_bands,
            vec![chroma; cells],
            vec![false; cells],
            l_min,
            l_max,
        )
    }

    pub fn hue_sectors(&self) -> usize {
        self.hue_sectors
    }

    pub fn lightness_bands(&self) -> usize {
        self.lightness_bands
    }

    pub fn l_min(&self) -> f64 {
        self.l_min
    }

    pub fn l_max(&self) -> f64 {
        self.l_max
    }

    pub fn max_chroma(&self, sector: usize, band: usize) -> f64 {
        self.max_chroma[sector * self.lightness_bands + band]
    }

    pub fn is_interpolated(&self, sector: usize, band: usize) -> bool {
        self.interpolated[sector * self.lightness_bands + band]
    }

    pub fn sector_of(&self, hue: f64) -> usize {
        sector_index(hue, self.hue_sectors)
    }

    pub fn band_of(&self, lightness: f64) -> usize {
        band_index(lightness, self.lightness_bands)
    }

    /// `(sector, band)` of a color.
    pub fn cell_of(&self, p: LabColor) -> (usize, usize) {
        let lch = lab_lch(p);
        (self.sector_of(lch.h), self.band_of(lch.l))
    }

    /// Hue range `[start, end)` of a sector in degrees.
    pub fn sector_hues(&self, sector: usize) -> (f64, f64) {
        let w = 360.0 / self.hue_sectors as f64;
        (sector as f64 * w, (sector + 1) as f64 * w)
    }

    /// L* range `[start, end)` of a band; the last band also holds 100.
    pub fn band_lightness(&self, band: usize) -> (f64, f64) {
        let w = 100.0 / self.lightness_bands as f64;
        (band as f64 * w, (band + 1) as f64 * w)
    }

    pub fn contains(&self, p: LabColor) -> bool {
        if !(self.l_min <= p.l && p.l <= self.l_max) {
            return false;
        }
        let lch = lab_lch(p);
        lch.c <= self.max_chroma(self.sector_of(lch.h), self.band_of(lch.l))
    }

    pub fn oog_fraction(&self, points: &[LabColor]) -> Result<f64, GamutError> {
        if points.is_empty() {
            return Err(GamutError::EmptyPoints);
        }
        let outside = points.iter().filter(|p| !self.contains(**p)).count();
        Ok(outside as f64 / points.len() as f64)
    }
}

pub(crate) fn sector_index(hue: f64, sectors: usize) -> usize {
    ((hue * sectors as f64 / 360.0).floor() as usize) % sectors
}

pub(crate) fn band_index(lightness: f64, bands: usize) -> usize {
    let b = (lightness * bands as f64 / 100.0).floor();
    (b.max(0.0) as usize).min(bands - 1)
}

/// Builds a boundary from the maximum chroma of the points in each cell.
///
/// An empty cell copies the nearest nonempty sector of its own band,
/// preferring the smaller value when two sectors are equally near, and is
/// flagged as interpolated. Bands without any point get zero chroma.
pub fn gamut_from_points(
    points: &[LabColor],
    hue_sectors: usize,
    lightness_bands: usize,
) -> Result<GamutBoundary, GamutError> {
    check_dims(hue_sectors, lightness_bands)?;
    if points.is_empty() {
        return Err(GamutError::EmptyPoints);
    }
    let (h, b) = (hue_sectors, lightness_bands);
    let mut measured: Vec<Option<f64>> = vec![None; h * b];
    let (mut l_min, mut l_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, p) in points.iter().enumerate() {
        if !(p.l.is_finite() && p.a.is_finite() && p.b.is_finite()) {
            return Err(GamutError::NonFinitePoint(i));
        }
        let lch = lab_lch(*p);
        let cell = &mut measured[sector_index(lch.h, h) * b + band_index(lch.l, b)];
        *cell = Some(cell.map_or(lch.c, |m| m.max(lch.c)));
        l_min = l_min.min(p.l);
        l_max = l_max.max(p.l);
    }

    let mut max_chroma = vec![0.0; h * b];
    let mut interpolated = vec![false; h * b];
    for band in 0..b {
        for sector in 0..h {
            let idx = sector * b + band;
            if let Some(c) = measured[idx] {
                max_chroma[idx] = c;
                continue;
            }
            interpolated[idx] = true;
            for dist in 1..=h / 2 {
                let left = measured[((sector + h - dist) % h) * b + band];
                let right = measured[((sector + dist) % h) * b + band];
                let nearest = match (left, right) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                if let Some(c) = nearest {
                    max_chroma[idx] = c;
                    break;
                }
            }
        }
    }
    GamutBoundary::new(h, b, max_chroma, interpolated, l_min, l_max)
}
