use serde::{Deserialize, Serialize};

use super::GamutError;
use crate::colorspace::LabColor;

/// One elementary gamut-mapping step.
///
/// JSON form: `{"type": "lightnessTranslate", "d": -5.0}`,
/// `{"type": "lightnessScale", "s": 0.9, "pivot": 50.0}`,
/// `{"type": "chromaScale", "s": 0.8}`, `{"type": "hueRotate", "theta": 10.0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum ElementaryTransform {
    LightnessTranslate { d: f64 },
    LightnessScale { s: f64, pivot: f64 },
    ChromaScale { s: f64 },
    HueRotate { theta: f64 },
}

/// Wraps an angle into `(-180, 180]`.
fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(360.0);
    if t > 180.0 {
        t - 360.0
    } else {
        t
    }
}

impl ElementaryTransform {
    /// Checks parameters and brings a rotation angle into `(-180, 180]`.
    pub fn normalized(self) -> Result<Self, GamutError> {
        use ElementaryTransform::*;
        let finite = |v: f64, what: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(GamutError::InvalidTransform(format!("{what} must be finite, got {v}")))
            }
        };
        let positive = |s: f64| {
            if s.is_finite() && s > 0.0 {
                Ok(())
            } else {
                Err(GamutError::InvalidTransform(format!(
                    "scale factor must be positive, got {s}"
                )))
            }
        };
        match self {
            LightnessTranslate { d } => finite(d, "translation").map(|_| self),
            LightnessScale { s, pivot } => {
                positive(s)?;
                finite(pivot, "pivot").map(|_| self)
            }
            ChromaScale { s } => positive(s).map(|_| self),
            HueRotate { theta } => {
                finite(theta, "rotation")?;
                Ok(HueRotate {
                    theta: wrap_angle(theta),
                })
            }
        }
    }

    /// Applies the step without clamping L*.
    pub fn apply(&self, p: LabColor) -> LabColor {
        use ElementaryTransform::*;
        match *self {
            LightnessTranslate { d } => LabColor::new(p.l + d, p.a, p.b),
            // written so that s = 1 returns l unchanged
            LightnessScale { s, pivot } => LabColor::new(s * p.l + (1.0 - s) * pivot, p.a, p.b),
            ChromaScale { s } => LabColor::new(p.l, s * p.a, s * p.b),
            HueRotate { theta } => {
                let (sin, cos) = theta.to_radians().sin_cos();
                LabColor::new(p.l, p.a * cos - p.b * sin, p.a * sin + p.b * cos)
            }
        }
    }
}

/// Ordered list of elementary transforms, applied first to last.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMap")]
pub struct GamutMap {
    transforms: Vec<ElementaryTransform>,
}

#[derive(Deserialize)]
struct RawMap {
    transforms: Vec<ElementaryTransform>,
}

impl TryFrom<RawMap> for GamutMap {
    type Error = GamutError;

    fn try_from(raw: RawMap) -> Result<Self, Self::Error> {
        GamutMap::new(raw.transforms)
    }
}

impl GamutMap {
    pub fn new(transforms: Vec<ElementaryTransform>) -> Result<Self, GamutError> {
        let transforms = transforms
            .into_iter()
            .map(ElementaryTransform::normalized)
            .collect::<Result<_, _>>()?;
        Ok(GamutMap { transforms })
    }

    pub fn identity() -> Self {
        GamutMap::default()
    }

    pub fn transforms(&self) -> &[ElementaryTransform] {
        &self.transforms
    }

    /// First chroma scale factor in the map, if any.
    pub fn chroma_scale(&self) -> Option<f64> {
        self.transforms.iter().find_map(|t| match t {
            ElementaryTransform::ChromaScale { s } => Some(*s),
            _ => None,
        })
    }
}

/// Applies `m` to `p` and reports whether L* had to be clamped into
/// `[0, 100]`.
pub fn apply_map_counted(m: &GamutMap, p: LabColor) -> (LabColor, bool) {
    let q = m.transforms.iter().fold(p, |acc, t| t.apply(acc));
    let l = q.l.clamp(0.0, 100.0);
    (LabColor::new(l, q.a, q.b), l != q.l)
}

pub fn apply_map(m: &GamutMap, p: LabColor) -> LabColor {
    apply_map_counted(m, p).0
}
