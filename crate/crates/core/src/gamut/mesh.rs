//! Triangle mesh of a boundary's surface.
//!
//! ```json
//! { "hueSectors": 36, "lightnessBands": 18, "watertight": true,
//!   "vertices": [ { "lab": { "l": 2.78, "a": 0.0, "b": 0.0 },
//!                   "rgb": { "r": 0.03, "g": 0.03, "b": 0.03 } } ],
//!   "triangles": [ [0, 18, 19] ] }
//! ```
//!
//! Vertex `s * B + b` sits on the cell of sector `s` and band `b`, at the
//! sector's center hue, the cell's maximum chroma and the band's center
//! L* (clamped to the boundary's gray-axis range). Vertices `H * B` and
//! `H * B + 1` are the bottom and top poles on the gray axis. Triangles are
//! wound counterclockwise seen from outside; `rgb` is the clamped sRGB
//! display color.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::GamutBoundary;
use crate::colorspace::{lab_to_rgb, lch_lab, LabColor, LchColor, RgbColor, D65};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshVertex {
    pub lab: LabColor,
    pub rgb: RgbColor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GamutMesh {
    pub hue_sectors: usize,
    pub lightness_bands: usize,
    pub vertices: Vec<MeshVertex>,
    pub triangles: Vec<[usize; 3]>,
    pub watertight: bool,
}

impl GamutMesh {
    /// Every index is in range and every edge borders exactly two
    /// triangles.
    pub fn is_watertight(&self) -> bool {
        let n = self.vertices.len();
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            if t.iter().any(|&i| i >= n) {
                return false;
            }
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *edges.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        edges.values().all(|&c| c == 2)
    }
}

fn vertex(lab: LabColor) -> MeshVertex {
    MeshVertex {
        lab,
        rgb: lab_to_rgb(lab, D65).0,
    }
}

pub fn boundary_mesh(bd: &GamutBoundary) -> GamutMesh {
    let (h, b) = (bd.hue_sectors(), bd.lightness_bands());
    let mut vertices = Vec::with_capacity(h * b + 2);
    for sector in 0..h {
        let (h0, h1) = bd.sector_hues(sector);
        for band in 0..b {
            let (l0, l1) = bd.band_lightness(band);
            let l = (0.5 * (l0 + l1)).clamp(bd.l_min(), bd.l_max());
            let c = bd.max_chroma(sector, band);
            vertices.push(vertex(lch_lab(LchColor::new(l, c, 0.5 * (h0 + h1)))));
        }
    }
    let bottom = h * b;
    let top = bottom + 1;
    vertices.push(vertex(LabColor::new(bd.l_min(), 0.0, 0.0)));
    vertices.push(vertex(LabColor::new(bd.l_max(), 0.0, 0.0)));

    let v = |sector: usize, band: usize| (sector % h) * b + band;
    let mut triangles = Vec::with_capacity(2 * h * b);
    for s in 0..h {
        for band in 0..b - 1 {
            triangles.push([v(s, band), v(s + 1, band), v(s + 1, band + 1)]);
            triangles.push([v(s, band), v(s + 1, band + 1), v(s, band + 1)]);
        }
        triangles.push([bottom, v(s + 1, 0), v(s, 0)]);
        triangles.push([top, v(s, b - 1), v(s + 1, b - 1)]);
    }
    let mut mesh = GamutMesh {
        hue_sectors: h,
        lightness_bands: b,
        vertices,
        triangles,
        watertight: false,
    };
    mesh.watertight = mesh.is_watertight();
    mesh
}
