use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use prepress_core::colorspace::LabColor;
use prepress_core::gamut::GamutBoundary;
use prepress_core::io::RasterImage;
use prepress_core::testchart::DeviceProfile;

#[derive(Debug)]
pub struct ImageAsset {
    pub image: RasterImage,
    pub lab: Vec<LabColor>,
}

#[derive(Debug)]
pub struct ProfileAsset {
    pub profile: DeviceProfile,
    pub gamut_points: Vec<LabColor>,
    pub boundary: GamutBoundary,
}

#[derive(Debug, Clone)]
pub enum Asset {
    Image(Arc<ImageAsset>),
    Profile(Arc<ProfileAsset>),
    Preview(Arc<RasterImage>),
}

impl Asset {
    pub fn kind(&self) -> &'static str {
        match self {
            Asset::Image(_) => "image",
            Asset::Profile(_) => "profile",
            Asset::Preview(_) => "preview",
        }
    }
}

#[derive(Default)]
struct Inner {
    next: u64,
    assets: HashMap<String, Asset>,
    /// Preview ids by request key, so identical requests share one id.
    previews: HashMap<String, String>,
}

/// In-memory asset store. Ids are issued from one counter and never reused.
#[derive(Default, Clone)]
pub struct AssetStore {
    inner: Arc<Mutex<Inner>>,
}

impl AssetStore {
    pub fn insert(&self, asset: Asset) -> String {
        let mut inner = self.inner.lock().expect("asset store lock");
        inner.next += 1;
        let id = format!("{}-{}", asset.kind(), inner.next);
        inner.assets.insert(id.clone(), asset);
        id
    }

    pub fn get(&self, id: &str) -> Option<Asset> {
        self.inner.lock().expect("asset store lock").assets.get(id).cloned()
    }

    /// Returns the preview stored under `key`, creating it with `make` on
    /// first use.
    pub fn preview_for(&self, key: String, make: impl FnOnce() -> RasterImage) -> String {
        if let Some(id) = self.inner.lock().expect("asset store lock").previews.get(&key) {
            return id.clone();
        }
        let image = make();
        let mut inner = self.inner.lock().expect("asset store lock");
        if let Some(id) = inner.previews.get(&key) {
            return id.clone();
        }
        inner.next += 1;
        let id = format!("preview-{}", inner.next);
        inner.assets.insert(id.clone(), Asset::Preview(Arc::new(image)));
        inner.previews.insert(key, id.clone());
        id
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("asset store lock").assets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
