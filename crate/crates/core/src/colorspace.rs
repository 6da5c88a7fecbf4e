//! sRGB, XYZ, CIELAB and LCh conversions, CIE76 color difference, and
//! GCR/UCR separation of encoded RGB into CMYK.
//!
//! The sRGB to XYZ matrix is derived from the primaries' chromaticities and
//! the D65 white point at first use, so that `M * (1, 1, 1)` reproduces the
//! white point to the last bit and white maps to `L* = 100` exactly.
//!
//! | constant                  | value                          |
//! |---------------------------|--------------------------------|
//! | decode threshold          | 0.04045                        |
//! | encode threshold          | 0.0031308                      |
//! | linear segment slope      | 12.92                          |
//! | power segment             | ((v + 0.055) / 1.055)^2.4      |
//! | red primary (x, y)        | (0.64, 0.33)                   |
//! | green primary (x, y)      | (0.30, 0.60)                   |
//! | blue primary (x, y)       | (0.15, 0.06)                   |
//! | D65 white (x, y)          | (0.3127, 0.3290)               |
//! | D50 white (x, y)          | (0.3457, 0.3585)               |
//! | Lab epsilon (6/29)^3      | 0.008856...                    |

use std::sync::LazyLock;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SRGB_DECODE_THRESHOLD: f64 = 0.04045;
pub const SRGB_ENCODE_THRESHOLD: f64 = 0.0031308;
pub const SRGB_LINEAR_SLOPE: f64 = 12.92;
pub const SRGB_GAMMA: f64 = 2.4;
pub const SRGB_OFFSET: f64 = 0.055;

const SRGB_PRIMARIES: [(f64, f64); 3] = [(0.64, 0.33), (0.30, 0.60), (0.15, 0.06)];
const D65_XY: (f64, f64) = (0.3127, 0.3290);
const D50_XY: (f64, f64) = (0.3457, 0.3585);

const LAB_DELTA: f64 = 6.0 / 29.0;

/// Linear RGB values may overshoot [0, 1] by this much and still count as
/// in gamut.
pub const GAMUT_EPSILON: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ColorError {
    #[error("{name} channel value {value} is outside [0, 1]")]
    ChannelOutOfRange { name: &'static str, value: f64 },
    #[error("invalid separation parameter {name} = {value}: expected {expected}")]
    InvalidSeparation {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
}

/// Encoded (nonlinear) sRGB with channels in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RgbColor {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl RgbColor {
    pub fn new(r: f64, g: f64, b: f64) -> Result<Self, ColorError> {
        let c = RgbColor { r, g, b };
        c.validate()?;
        Ok(c)
    }

    pub const fn gray(v: f64) -> Self {
        RgbColor { r: v, g: v, b: v }
    }

    pub fn validate(&self) -> Result<(), ColorError> {
        for (name, value) in [("red", self.r), ("green", self.g), ("blue", self.b)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ColorError::ChannelOutOfRange { name, value });
            }
        }
        Ok(())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.r, self.g, self.b]
    }
}

/// Relative tristimulus values, normalized so that the white has `Y = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct XyzColor {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LabColor {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl LabColor {
    pub const fn new(l: f64, a: f64, b: f64) -> Self {
        LabColor { l, a, b }
    }

    pub fn chroma(&self) -> f64 {
        self.a.hypot(self.b)
    }

    pub fn to_lch(self) -> LchColor {
        lab_lch(self)
    }
}

/// Cylindrical CIELAB. Hue is in degrees, `[0, 360)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LchColor {
    pub l: f64,
    pub c: f64,
    pub h: f64,
}

impl LchColor {
    pub const fn new(l: f64, c: f64, h: f64) -> Self {
        LchColor { l, c, h }
    }

    pub fn to_lab(self) -> LabColor {
        lch_lab(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CmykColor {
    pub c: f64,
    pub m: f64,
    pub y: f64,
    pub k: f64,
}

impl CmykColor {
    pub fn total_ink(&self) -> f64 {
        self.c + self.m + self.y + self.k
    }
}

/// Black generation and ink limiting controls.
///
/// `black_start` is the gray-component level at which black ink begins and
/// `black_width` the length of the ramp over which it reaches full
/// `gcr_strength`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeparationParams {
    pub gcr_strength: f64,
    pub black_start: f64,
    pub black_width: f64,
    pub total_ink_limit: f64,
}

impl SeparationParams {
    pub fn new(
        gcr_strength: f64,
        black_start: f64,
        black_width: f64,
        total_ink_limit: f64,
    ) -> Result<Self, ColorError> {
        let p = SeparationParams {
            gcr_strength,
            black_start,
            black_width,
            total_ink_limit,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ColorError> {
        let bad = |name, value, expected| {
            Err(ColorError::InvalidSeparation {
                name,
                value,
                expected,
            })
        };
        if !(0.0..=1.0).contains(&self.gcr_strength) {
            return bad("gcrStrength", self.gcr_strength, "[0, 1]");
        }
        if !(0.0..=1.0).contains(&self.black_start) {
            return bad("blackStart", self.black_start, "[0, 1]");
        }
        if !(self.black_width > 0.0 && self.black_width <= 1.0) {
            return bad("blackWidth", self.black_width, "(0, 1]");
        }
        if !(1.0..=4.0).contains(&self.total_ink_limit) {
            return bad("totalInkLimit", self.total_ink_limit, "[1, 4]");
        }
        Ok(())
    }
}

/// Reference white, `yn = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WhitePoint {
    pub xn: f64,
    pub yn: f64,
    pub zn: f64,
}

impl WhitePoint {
    pub const fn from_chromaticity(x: f64, y: f64) -> Self {
        WhitePoint {
            xn: x / y,
            yn: 1.0,
            zn: (1.0 - x - y) / y,
        }
    }

    fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.xn, self.yn, self.zn)
    }
}

pub const D65: WhitePoint = WhitePoint::from_chromaticity(D65_XY.0, D65_XY.1);
/// Measurement files often carry D50 Lab; it is used as-is, without
/// chromatic adaptation.
pub const D50: WhitePoint = WhitePoint::from_chromaticity(D50_XY.0, D50_XY.1);

struct SrgbMatrices {
    to_xyz: Matrix3<f64>,
    from_xyz: Matrix3<f64>,
}

static SRGB: LazyLock<SrgbMatrices> = LazyLock::new(|| {
    let column = |(x, y): (f64, f64)| Vector3::new(x / y, 1.0, (1.0 - x - y) / y);
    let primaries = Matrix3::from_columns(&SRGB_PRIMARIES.map(column));
    let scale = primaries
        .try_inverse()
        .expect("sRGB primaries are linearly independent")
        * D65.as_vector();
    let to_xyz = primaries * Matrix3::from_diagonal(&scale);
    let from_xyz = to_xyz.try_inverse().expect("sRGB matrix is invertible");
    SrgbMatrices { to_xyz, from_xyz }
});

fn decode_channel(v: f64) -> f64 {
    if v <= SRGB_DECODE_THRESHOLD {
        v / SRGB_LINEAR_SLOPE
    } else {
        ((v + SRGB_OFFSET) / (1.0 + SRGB_OFFSET)).powf(SRGB_GAMMA)
    }
}

fn encode_channel(v: f64) -> f64 {
    if v <= SRGB_ENCODE_THRESHOLD {
        v * SRGB_LINEAR_SLOPE
    } else {
        (1.0 + SRGB_OFFSET) * v.powf(1.0 / SRGB_GAMMA) - SRGB_OFFSET
    }
}

/// Electro-optical sRGB decode of each channel.
pub fn srgb_decode(rgb: RgbColor) -> Result<[f64; 3], ColorError> {
    rgb.validate()?;
    Ok(rgb.to_array().map(decode_channel))
}

pub fn linear_to_xyz(linear: [f64; 3]) -> XyzColor {
    let v = SRGB.to_xyz * Vector3::from(linear);
    XyzColor {
        x: v.x,
        y: v.y,
        z: v.z,
    }
}

pub fn xyz_to_linear(xyz: XyzColor) -> [f64; 3] {
    let v = SRGB.from_xyz * Vector3::new(xyz.x, xyz.y, xyz.z);
    [v.x, v.y, v.z]
}

fn lab_f(t: f64) -> f64 {
    if t > LAB_DELTA.powi(3) {
        t.cbrt()
    } else {
        t / (3.0 * LAB_DELTA * LAB_DELTA) + 4.0 / 29.0
    }
}

fn lab_f_inv(f: f64) -> f64 {
    if f > LAB_DELTA {
        f * f * f
    } else {
        3.0 * LAB_DELTA * LAB_DELTA * (f - 4.0 / 29.0)
    }
}

pub fn xyz_to_lab(xyz: XyzColor, wp: WhitePoint) -> LabColor {
    let fx = lab_f(xyz.x / wp.xn);
    let fy = lab_f(xyz.y / wp.yn);
    let fz = lab_f(xyz.z / wp.zn);
    LabColor {
        l: 116.0 * fy - 16.0,
        a: 500.0 * (fx - fy),
        b: 200.0 * (fy - fz),
    }
}

pub fn lab_to_xyz(lab: LabColor, wp: WhitePoint) -> XyzColor {
    let fy = (lab.l + 16.0) / 116.0;
    let fx = fy + lab.a / 500.0;
    let fz = fy - lab.b / 200.0;
    XyzColor {
        x: wp.xn * lab_f_inv(fx),
        y: wp.yn * lab_f_inv(fy),
        z: wp.zn * lab_f_inv(fz),
    }
}

pub fn rgb_to_lab(rgb: RgbColor, wp: WhitePoint) -> Result<LabColor, ColorError> {
    Ok(xyz_to_lab(linear_to_xyz(srgb_decode(rgb)?), wp))
}

/// Conversion for pixels whose range has already been validated.
pub(crate) fn rgb_to_lab_trusted(rgb: RgbColor) -> LabColor {
    xyz_to_lab(linear_to_xyz(rgb.to_array().map(decode_channel)), D65)
}

/// Inverse of [`rgb_to_lab`]. The flag is `false` when any linear channel
/// fell outside `[0, 1]`; the returned color is clamped in that case.
pub fn lab_to_rgb(lab: LabColor, wp: WhitePoint) -> (RgbColor, bool) {
    let linear = xyz_to_linear(lab_to_xyz(lab, wp));
    let in_gamut = linear
        .iter()
        .all(|&v| (-GAMUT_EPSILON..=1.0 + GAMUT_EPSILON).contains(&v));
    let [r, g, b] = linear.map(|v| encode_channel(v.clamp(0.0, 1.0)));
    (RgbColor { r, g, b }, in_gamut)
}

pub fn lab_in_srgb_gamut(lab: LabColor) -> bool {
    lab_to_rgb(lab, D65).1
}

pub fn lab_lch(lab: LabColor) -> LchColor {
    let c = lab.a.hypot(lab.b);
    let h = if c == 0.0 {
        0.0
    } else {
        normalize_hue(lab.b.atan2(lab.a).to_degrees())
    };
    LchColor { l: lab.l, c, h }
}

pub fn lch_lab(lch: LchColor) -> LabColor {
    let (sin, cos) = lch.h.to_radians().sin_cos();
    LabColor {
        l: lch.l,
        a: lch.c * cos,
        b: lch.c * sin,
    }
}

/// Wraps an angle in degrees into `[0, 360)`.
pub fn normalize_hue(h: f64) -> f64 {
    let w = h.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

/// Smallest absolute angular difference between two hues, in `[0, 180]`.
pub fn hue_distance(h1: f64, h2: f64) -> f64 {
    let d = (h1 - h2).rem_euclid(360.0);
    d.min(360.0 - d)
}

pub fn delta_e76(p: LabColor, q: LabColor) -> f64 {
    ((p.l - q.l).powi(2) + (p.a - q.a).powi(2) + (p.b - q.b).powi(2)).sqrt()
}

/// Naive encoded-domain separation with gray component replacement and
/// total ink limiting. Ink limiting scales C, M and Y and leaves K alone.
pub fn separate_to_cmyk(rgb: RgbColor, params: &SeparationParams) -> CmykColor {
    let (mut c, mut m, mut y) = (1.0 - rgb.r, 1.0 - rgb.g, 1.0 - rgb.b);
    let gray = c.min(m).min(y);
    let ramp = ((gray - params.black_start) / params.black_width).clamp(0.0, 1.0);
    let k = params.gcr_strength * ramp * gray;
    c = (c - k).max(0.0);
    m = (m - k).max(0.0);
    y = (y - k).max(0.0);
    let cmy = c + m + y;
    if cmy + k > params.total_ink_limit {
        // k <= 1 <= limit, so the remaining budget is never negative
        let factor = (params.total_ink_limit - k) / cmy;
        c *= factor;
        m *= factor;
        y *= factor;
    }
    CmykColor { c, m, y, k }
}
