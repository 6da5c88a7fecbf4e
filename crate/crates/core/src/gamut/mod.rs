//! Segment-maxima gamut boundaries, elementary gamut-mapping transforms,
//! principle scoring, automatic fitting and mesh export.
//!
//! A boundary divides CIELAB into `H` hue sectors of `360/H` degrees and
//! `B` lightness bands of `100/B` L* units and stores the largest chroma
//! seen in each cell. A color is inside when its L* lies on the boundary's
//! gray-axis range and its chroma does not exceed the maximum of its cell.

mod boundary;
mod fit;
mod image;
mod mesh;
mod transform;

pub use boundary::{gamut_from_points, GamutBoundary, DEFAULT_BANDS, DEFAULT_SECTORS};
pub use fit::{
    auto_fit, objective, score_principles, AutoFitConfig, AutoFitResult, PrincipleScores,
    Weights, CHROMATIC_THRESHOLD, CHROMA_DECREASE_EPSILON, DEFAULT_WEIGHTS, LIGHTNESS_PIVOT,
};
pub use image::{
    image_lab_points, map_image, oog_mask, oog_mask_of_points, pixels_for_region, LchRegion,
    OogMask, RleMask,
};
pub use mesh::{boundary_mesh, GamutMesh, MeshVertex};
pub use transform::{apply_map, apply_map_counted, ElementaryTransform, GamutMap};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GamutError {
    #[error("at least one point is required")]
    EmptyPoints,
    #[error("at least {min} hue sectors are required, got {got}")]
    TooFewSectors { got: usize, min: usize },
    #[error("at least {min} lightness bands are required, got {got}")]
    TooFewBands { got: usize, min: usize },
    #[error("point {0} is not finite")]
    NonFinitePoint(usize),
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),
    #[error("invalid transform: {0}")]
    InvalidTransform(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("mask has {bits} bits but {width}x{height} needs {expected}")]
    MaskSize {
        width: usize,
        height: usize,
        bits: usize,
        expected: usize,
    },
}
