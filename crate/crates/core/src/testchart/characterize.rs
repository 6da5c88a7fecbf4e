//! Device characterization: measurement sets, LUT profiles and their
//! forward evaluation.
//!
//! Scattered measurements are resampled onto a regular device-RGB grid by
//! inverse-distance weighting (power 2) over the nearest measurements.
//! Each measurement contributes its value extended along a local linear fit
//! of its own neighborhood, so a device that is affine in RGB is reproduced
//! without the flattening plain IDW shows between samples. Profiles are
//! evaluated with tetrahedral interpolation.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colorspace::{ColorError, LabColor, RgbColor};

pub const MIN_MEASUREMENTS: usize = 8;

/// Measurements closer than this to a grid node set the node directly.
const EXACT_HIT: f64 = 1e-6;
/// Neighbors blended per grid node.
const BLEND_NEIGHBORS: usize = 8;
/// Neighbors (including the measurement itself) used for local gradients.
const GRADIENT_NEIGHBORS: usize = 10;
// Node coordinates this close to an integer are snapped onto the node.
const NODE_SNAP: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("characterization needs at least {MIN_MEASUREMENTS} measurements, got {0}")]
    TooFewMeasurements(usize),
    #[error("a measurement set needs at least one entry")]
    EmptyMeasurementSet,
    #[error("measurement {index}: {source}")]
    Device { index: usize, source: ColorError },
    #[error("measurement {index}: Lab value is not finite")]
    NonFinite { index: usize },
    #[error("grid size must be at least 2, got {0}")]
    GridTooSmall(usize),
    #[error("grid of {grid_n}^3 nodes needs {expected} LUT entries, got {actual}")]
    LutSize {
        grid_n: usize,
        expected: usize,
        actual: usize,
    },
    #[error("LUT entry {index} has L* = {l}, outside [0, 100]")]
    LutLightness { index: usize, l: f64 },
    #[error("sample count per axis must be at least 2, got {0}")]
    TooFewSamples(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub device: RgbColor,
    pub measured: LabColor,
    /// Columns of the source file that are not device or Lab values.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, String>,
}

impl Measurement {
    pub fn new(device: RgbColor, measured: LabColor) -> Self {
        Measurement {
            device,
            measured,
            extras: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementSet {
    entries: Vec<Measurement>,
    metadata: BTreeMap<String, String>,
}

impl MeasurementSet {
    pub fn new(
        entries: Vec<Measurement>,
        metadata: BTreeMap<String, String>,
    ) -> Result<Self, ProfileError> {
        if entries.is_empty() {
            return Err(ProfileError::EmptyMeasurementSet);
        }
        for (index, e) in entries.iter().enumerate() {
            e.device
                .validate()
                .map_err(|source| ProfileError::Device { index, source })?;
            let m = e.measured;
            if !(m.l.is_finite() && m.a.is_finite() && m.b.is_finite()) {
                return Err(ProfileError::NonFinite { index });
            }
        }
        Ok(MeasurementSet { entries, metadata })
    }

    /// Entries already validated by a parser.
    pub(crate) fn from_parts(entries: Vec<Measurement>, metadata: BTreeMap<String, String>) -> Self {
        debug_assert!(!entries.is_empty());
        MeasurementSet { entries, metadata }
    }

    pub fn entries(&self) -> &[Measurement] {
        &self.entries
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }
}

/// Device RGB to Lab lookup table on a `grid_n`^3 lattice.
///
/// `lut[(r * grid_n + g) * grid_n + b]` holds the Lab value at device
/// coordinates `(r, g, b) / (grid_n - 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", try_from = "RawProfile")]
pub struct DeviceProfile {
    grid_n: usize,
    lut: Vec<LabColor>,
    metadata: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawProfile {
    grid_n: usize,
    lut: Vec<LabColor>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

impl TryFrom<RawProfile> for DeviceProfile {
    type Error = ProfileError;

    fn try_from(raw: RawProfile) -> Result<Self, Self::Error> {
        DeviceProfile::new(raw.grid_n, raw.lut, raw.metadata)
    }
}

impl DeviceProfile {
    pub fn new(
        grid_n: usize,
        lut: Vec<LabColor>,
        metadata: BTreeMap<String, String>,
    ) -> Result<Self, ProfileError> {
        if grid_n < 2 {
            return Err(ProfileError::GridTooSmall(grid_n));
        }
        let expected = grid_n.pow(3);
        if lut.len() != expected {
            return Err(ProfileError::LutSize {
                grid_n,
                expected,
                actual: lut.len(),
            });
        }
        for (index, v) in lut.iter().enumerate() {
            if !(0.0..=100.0).contains(&v.l) || !v.a.is_finite() || !v.b.is_finite() {
                return Err(ProfileError::LutLightness { index, l: v.l });
            }
        }
        Ok(DeviceProfile {
            grid_n,
            lut,
            metadata,
        })
    }

    /// Fills every node from a function of its device coordinates.
    pub fn from_fn(
        grid_n: usize,
        f: impl Fn(RgbColor) -> LabColor,
    ) -> Result<Self, ProfileError> {
        if grid_n < 2 {
            return Err(ProfileError::GridTooSmall(grid_n));
        }
        let lut = (0..grid_n.pow(3)).map(|i| f(node_rgb(grid_n, i))).collect();
        Self::new(grid_n, lut, BTreeMap::new())
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    pub fn lut(&self) -> &[LabColor] {
        &self.lut
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn node(&self, r: usize, g: usize, b: usize) -> LabColor {
        self.lut[(r * self.grid_n + g) * self.grid_n + b]
    }
}

fn node_rgb(grid_n: usize, index: usize) -> RgbColor {
    let step = (grid_n - 1) as f64;
    let (r, rest) = (index / (grid_n * grid_n), index % (grid_n * grid_n));
    let (g, b) = (rest / grid_n, rest % grid_n);
    RgbColor {
        r: r as f64 / step,
        g: g as f64 / step,
        b: b as f64 / step,
    }
}

fn to_vec(c: RgbColor) -> Vector3<f64> {
    Vector3::new(c.r, c.g, c.b)
}

fn lab_vec(c: LabColor) -> Vector3<f64> {
    Vector3::new(c.l, c.a, c.b)
}

/// Indices of the `k` points nearest to `at`, ties broken by index.
fn nearest(points: &[Vector3<f64>], at: &Vector3<f64>, k: usize) -> Vec<(f64, usize)> {
    let mut d: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| ((p - at).norm(), i))
        .collect();
    d.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    d.truncate(k);
    d
}

/// Least-squares Jacobian of Lab with respect to device RGB around one
/// measurement. Degenerate neighborhoods fall back to the minimum-norm
/// solution, and to zero if even that fails.
fn local_gradient(points: &[Vector3<f64>], values: &[Vector3<f64>], i: usize) -> Matrix3<f64> {
    let neighbors = nearest(points, &points[i], GRADIENT_NEIGHBORS);
    let n = neighbors.len();
    let mut design = DMatrix::zeros(n, 4);
    let mut rhs = DMatrix::zeros(n, 3);
    for (row, &(_, j)) in neighbors.iter().enumerate() {
        let dx = points[j] - points[i];
        design[(row, 0)] = 1.0;
        for c in 0..3 {
            design[(row, c + 1)] = dx[c];
            rhs[(row, c)] = values[j][c];
        }
    }
    match design.svd(true, true).solve(&rhs, 1e-10) {
        Ok(coef) if coef.iter().all(|v| v.is_finite()) => {
            // rows 1..4 are d(Lab)/d(rgb); transpose into a Jacobian
            Matrix3::from_fn(|out, inp| coef[(inp + 1, out)])
        }
        _ => Matrix3::zeros(),
    }
}

pub fn characterize_device(ms: &MeasurementSet, grid_n: usize) -> Result<DeviceProfile, ProfileError> {
    if ms.entries.len() < MIN_MEASUREMENTS {
        return Err(ProfileError::TooFewMeasurements(ms.entries.len()));
    }
    if grid_n < 2 {
        return Err(ProfileError::GridTooSmall(grid_n));
    }
    let points: Vec<_> = ms.entries.iter().map(|e| to_vec(e.device)).collect();
    let values: Vec<_> = ms.entries.iter().map(|e| lab_vec(e.measured)).collect();
    let gradients: Vec<_> = (0..points.len())
        .into_par_iter()
        .map(|i| local_gradient(&points, &values, i))
        .collect();

    let lut = (0..grid_n.pow(3))
        .into_par_iter()
        .map(|index| {
            let node = to_vec(node_rgb(grid_n, index));
            let neighbors = nearest(&points, &node, BLEND_NEIGHBORS);
            let (d0, i0) = neighbors[0];
            let v = if d0 < EXACT_HIT {
                values[i0]
            } else {
                let mut acc = Vector3::zeros();
                let mut weight = 0.0;
                for &(d, i) in &neighbors {
                    let w = 1.0 / (d * d);
                    acc += w * (values[i] + gradients[i] * (node - points[i]));
                    weight += w;
                }
                acc / weight
            };
            LabColor::new(v.x.clamp(0.0, 100.0), v.y, v.z)
        })
        .collect();
    DeviceProfile::new(grid_n, lut, ms.metadata.clone())
}

fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < NODE_SNAP {
        r
    } else {
        x
    }
}

/// Tetrahedral interpolation. The cell is split along its main diagonal
/// into six tetrahedra selected by the order of the fractional parts.
pub fn profile_eval(p: &DeviceProfile, device: RgbColor) -> LabColor {
    let n = p.grid_n;
    let top = (n - 1) as f64;
    let axis = |v: f64| {
        let x = snap(v.clamp(0.0, 1.0) * top);
        let i0 = (x.floor() as usize).min(n - 1);
        (i0, (i0 + 1).min(n - 1), x - i0 as f64)
    };
    let (r0, r1, fr) = axis(device.r);
    let (g0, g1, fg) = axis(device.g);
    let (b0, b1, fb) = axis(device.b);
    let c = |r, g, b| lab_vec(p.node(r, g, b));

    let c000 = c(r0, g0, b0);
    let c111 = c(r1, g1, b1);
    let v = if fr >= fg && fg >= fb {
        let (c100, c110) = (c(r1, g0, b0), c(r1, g1, b0));
        c000 + fr * (c100 - c000) + fg * (c110 - c100) + fb * (c111 - c110)
    } else if fr >= fb && fb >= fg {
        let (c100, c101) = (c(r1, g0, b0), c(r1, g0, b1));
        c000 + fr * (c100 - c000) + fb * (c101 - c100) + fg * (c111 - c101)
    } else if fb >= fr && fr >= fg {
        let (c001, c101) = (c(r0, g0, b1), c(r1, g0, b1));
        c000 + fb * (c001 - c000) + fr * (c101 - c001) + fg * (c111 - c101)
    } else if fg >= fr && fr >= fb {
        let (c010, c110) = (c(r0, g1, b0), c(r1, g1, b0));
        c000 + fg * (c010 - c000) + fr * (c110 - c010) + fb * (c111 - c110)
    } else if fg >= fb && fb >= fr {
        let (c010, c011) = (c(r0, g1, b0), c(r0, g1, b1));
        c000 + fg * (c010 - c000) + fb * (c011 - c010) + fr * (c111 - c011)
    } else {
        let (c001, c011) = (c(r0, g0, b1), c(r0, g1, b1));
        c000 + fb * (c001 - c000) + fg * (c011 - c001) + fr * (c111 - c011)
    };
    LabColor::new(v.x, v.y, v.z)
}

/// Profile output over a regular `samples_per_axis`^3 device grid.
pub fn profile_gamut_points(
    p: &DeviceProfile,
    samples_per_axis: usize,
) -> Result<Vec<LabColor>, ProfileError> {
    if samples_per_axis < 2 {
        return Err(ProfileError::TooFewSamples(samples_per_axis));
    }
    Ok((0..samples_per_axis.pow(3))
        .map(|i| profile_eval(p, node_rgb(samples_per_axis, i)))
        .collect())
}
