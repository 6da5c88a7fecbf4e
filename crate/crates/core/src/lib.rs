//! Prepress color toolkit: CIELAB colorimetry and GCR/UCR separation, L*
//! key classification of images, image-adapted and IT8 test charts, device
//! characterization, and segment-maxima gamut mapping.

pub mod classification;
pub mod colorspace;
pub mod gamut;
pub mod io;
pub mod testchart;

pub use classification::{ImageKeyClass, KeyMassReport, LStarHistogram};
pub use colorspace::{CmykColor, LabColor, LchColor, RgbColor, SeparationParams, WhitePoint};
pub use io::RasterImage;
