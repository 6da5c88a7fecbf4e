//! HTTP service over the prepress toolkit.
//!
//! | method | path                               | body / query                                   |
//! |--------|------------------------------------|------------------------------------------------|
//! | POST   | `/api/assets`                      | `?kind=image` (PPM bytes) or `?kind=profile&grid=N` (CGATS text) |
//! | GET    | `/api/assets/{id}`                 | PPM bytes of an image or preview               |
//! | GET    | `/api/assets/{id}/classification`  | `?steps=N&excludeBg=true`                      |
//! | GET    | `/api/assets/{id}/mesh`            | `?source=image\|profile`                       |
//! | POST   | `/api/map/preview`                 | `{imageId, profileId, transforms}`             |
//! | POST   | `/api/map/autofit`                 | `{imageId, profileId, weights, includeHueRotate}` |
//! | GET    | `/api/charts/it8`                  |                                                |
//! | POST   | `/api/charts/adapted`              | `{class, rows, cols}`                          |
//!
//! A profile's gamut is built from its output sampled on a regular device
//! grid together with the measured colors it was characterized from.
//!
//! Errors are `{"error": {"code", "message"}}` with 404 for unknown ids,
//! 413 for oversized bodies and 422 for anything the toolkit rejects.

mod error;
mod store;

use std::sync::Arc;

use axum::body::{Body, Bytes};
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use prepress_core::classification::{
    classify_key, lstar_histogram, ImageKeyClass, KeyMassReport, DEFAULT_STEP_COUNT,
};
use prepress_core::gamut::{
    apply_map, auto_fit, boundary_mesh, gamut_from_points, map_image, oog_mask_of_points,
    score_principles, AutoFitConfig, ElementaryTransform, GamutMap, PrincipleScores, RleMask,
    Weights, DEFAULT_BANDS, DEFAULT_SECTORS,
};
use prepress_core::io::{parse_cgats, read_ppm, write_ppm};
use prepress_core::testchart::{
    build_it8_target, characterize_device, generate_adapted_chart, profile_gamut_points,
};

pub use error::ApiError;
pub use store::{Asset, AssetStore, ImageAsset, ProfileAsset};

pub const DEFAULT_GRID: usize = 9;

#[derive(Debug, Clone, Copy)]
pub struct ServiceConfig {
    pub max_body_bytes: usize,
    /// Characterization grid for profile ingests without `grid`.
    pub default_grid: usize,
    /// Device samples per axis when deriving a profile's gamut.
    pub profile_samples: usize,
    pub hue_sectors: usize,
    pub lightness_bands: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            max_body_bytes: 16 << 20,
            default_grid: DEFAULT_GRID,
            profile_samples: 17,
            hue_sectors: DEFAULT_SECTORS,
            lightness_bands: DEFAULT_BANDS,
        }
    }
}

#[derive(Clone)]
struct AppState {
    store: AssetStore,
    config: ServiceConfig,
}

pub fn app(config: ServiceConfig) -> Router {
    app_with_store(config, AssetStore::default())
}

pub fn app_with_store(config: ServiceConfig, store: AssetStore) -> Router {
    Router::new()
        .route("/api/assets", post(ingest_asset))
        .route("/api/assets/{id}", get(fetch_asset))
        .route("/api/assets/{id}/classification", get(classification))
        .route("/api/assets/{id}/mesh", get(fetch_mesh))
        .route("/api/map/preview", post(preview_mapping))
        .route("/api/map/autofit", post(autofit))
        .route("/api/charts/it8", get(it8_chart))
        .route("/api/charts/adapted", post(adapted_chart))
        .with_state(AppState { store, config })
}

type ApiResult<T> = Result<T, ApiError>;

async fn read_body(body: Body, limit: usize) -> ApiResult<Bytes> {
    axum::body::to_bytes(body, limit)
        .await
        .map_err(|_| ApiError::too_large(limit))
}

async fn read_json<T: DeserializeOwned>(body: Body, limit: usize) -> ApiResult<T> {
    let bytes = read_body(body, limit).await?;
    serde_json::from_slice(&bytes).map_err(ApiError::unprocessable)
}

fn query<T>(q: Result<Query<T>, QueryRejection>) -> ApiResult<T> {
    q.map(|Query(v)| v).map_err(|e| ApiError::unprocessable(e.body_text()))
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(ApiError::internal)?
}

impl AppState {
    fn lookup(&self, id: &str) -> ApiResult<Asset> {
        self.store.get(id).ok_or_else(|| ApiError::not_found(id))
    }

    fn image(&self, id: &str) -> ApiResult<Arc<ImageAsset>> {
        match self.lookup(id)? {
            Asset::Image(a) => Ok(a),
            other => Err(ApiError::unprocessable(format!("{id} is a {}, not an image", other.kind()))),
        }
    }

    fn profile(&self, id: &str) -> ApiResult<Arc<ProfileAsset>> {
        match self.lookup(id)? {
            Asset::Profile(a) => Ok(a),
            other => Err(ApiError::unprocessable(format!("{id} is a {}, not a profile", other.kind()))),
        }
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum AssetKind {
    Image,
    Profile,
}

#[derive(Deserialize)]
struct IngestQuery {
    kind: AssetKind,
    grid: Option<usize>,
}

#[derive(Serialize)]
struct Created {
    id: String,
    kind: &'static str,
}

async fn ingest_asset(
    State(state): State<AppState>,
    q: Result<Query<IngestQuery>, QueryRejection>,
    body: Body,
) -> ApiResult<Response> {
    let q = query(q)?;
    let cfg = state.config;
    let bytes = read_body(body, cfg.max_body_bytes).await?;
    let asset = blocking(move || match q.kind {
        AssetKind::Image => {
            let image = read_ppm(&bytes).map_err(ApiError::unprocessable)?;
            let lab = prepress_core::gamut::image_lab_points(&image);
            Ok(Asset::Image(Arc::new(ImageAsset { image, lab })))
        }
        AssetKind::Profile => {
            let text = std::str::from_utf8(&bytes).map_err(ApiError::unprocessable)?;
            let set = parse_cgats(text).map_err(ApiError::unprocessable)?;
            let profile = characterize_device(&set, q.grid.unwrap_or(cfg.default_grid))
                .map_err(ApiError::unprocessable)?;
            let mut gamut_points =
                profile_gamut_points(&profile, cfg.profile_samples).map_err(ApiError::unprocessable)?;
            gamut_points.extend(set.entries().iter().map(|e| e.measured));
            let boundary = gamut_from_points(&gamut_points, cfg.hue_sectors, cfg.lightness_bands)
                .map_err(ApiError::unprocessable)?;
            Ok(Asset::Profile(Arc::new(ProfileAsset {
                profile,
                gamut_points,
                boundary,
            })))
        }
    })
    .await?;
    let kind = asset.kind();
    let id = state.store.insert(asset);
    Ok((StatusCode::CREATED, Json(Created { id, kind })).into_response())
}

async fn fetch_asset(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let bytes = match state.lookup(&id)? {
        Asset::Image(a) => write_ppm(&a.image),
        Asset::Preview(img) => write_ppm(&img),
        Asset::Profile(p) => {
            return Ok(Json(p.profile.clone()).into_response());
        }
    };
    Ok(([(header::CONTENT_TYPE, "image/x-portable-pixmap")], bytes).into_response())
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct ClassifyQuery {
    steps: Option<usize>,
    #[serde(default)]
    exclude_bg: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Classification {
    #[serde(flatten)]
    report: KeyMassReport,
    histogram: Vec<u64>,
}

async fn classification(
    State(state): State<AppState>,
    Path(id): Path<String>,
    q: Result<Query<ClassifyQuery>, QueryRejection>,
) -> ApiResult<Json<Classification>> {
    let q = query(q)?;
    let asset = state.image(&id)?;
    blocking(move || {
        let hist = lstar_histogram(&asset.image, q.steps.unwrap_or(DEFAULT_STEP_COUNT))
            .map_err(ApiError::unprocessable)?;
        Ok(Json(Classification {
            report: classify_key(&hist, q.exclude_bg),
            histogram: hist.counts().to_vec(),
        }))
    })
    .await
}

#[derive(Deserialize)]
struct MeshQuery {
    source: Option<AssetKind>,
}

async fn fetch_mesh(
    State(state): State<AppState>,
    Path(id): Path<String>,
    q: Result<Query<MeshQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let q = query(q)?;
    let asset = state.lookup(&id)?;
    let cfg = state.config;
    blocking(move || {
        let boundary = match (asset, q.source) {
            (Asset::Image(a), None | Some(AssetKind::Image)) => {
                gamut_from_points(&a.lab, cfg.hue_sectors, cfg.lightness_bands)
                    .map_err(ApiError::unprocessable)?
            }
            (Asset::Profile(p), None | Some(AssetKind::Profile)) => p.boundary.clone(),
            (other, _) => {
                return Err(ApiError::unprocessable(format!(
                    "{id} is a {}, which does not match the requested source",
                    other.kind()
                )))
            }
        };
        Ok(Json(boundary_mesh(&boundary)).into_response())
    })
    .await
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct PreviewRequest {
    image_id: String,
    profile_id: String,
    transforms: Vec<ElementaryTransform>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PreviewResponse {
    scores: PrincipleScores,
    preview_id: String,
    mask: RleMask,
}

async fn preview_mapping(State(state): State<AppState>, body: Body) -> ApiResult<Json<PreviewResponse>> {
    let req: PreviewRequest = read_json(body, state.config.max_body_bytes).await?;
    let image = state.image(&req.image_id)?;
    let profile = state.profile(&req.profile_id)?;
    let map = GamutMap::new(req.transforms).map_err(ApiError::unprocessable)?;
    let key = format!(
        "{}|{}|{}",
        req.image_id,
        req.profile_id,
        serde_json::to_string(&map).map_err(ApiError::internal)?
    );
    let store = state.store.clone();
    blocking(move || {
        let scores = score_principles(&image.lab, &profile.boundary, &map).map_err(ApiError::unprocessable)?;
        let mapped: Vec<_> = image.lab.iter().map(|p| apply_map(&map, *p)).collect();
        let mask = oog_mask_of_points(image.image.width(), image.image.height(), &mapped, &profile.boundary);
        let preview_id = store.preview_for(key, || map_image(&image.image, &map));
        Ok(Json(PreviewResponse {
            scores,
            preview_id,
            mask: mask.to_rle(),
        }))
    })
    .await
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct AutofitRequest {
    image_id: String,
    profile_id: String,
    weights: Weights,
    #[serde(default)]
    include_hue_rotate: bool,
}

async fn autofit(State(state): State<AppState>, body: Body) -> ApiResult<Response> {
    let req: AutofitRequest = read_json(body, state.config.max_body_bytes).await?;
    let image = state.image(&req.image_id)?;
    let profile = state.profile(&req.profile_id)?;
    blocking(move || {
        let cfg = AutoFitConfig {
            include_hue_rotate: req.include_hue_rotate,
            ..AutoFitConfig::default()
        };
        let fit = auto_fit(&image.lab, &profile.boundary, &req.weights, &cfg)
            .map_err(ApiError::unprocessable)?;
        Ok(Json(fit).into_response())
    })
    .await
}

async fn it8_chart() -> ApiResult<Response> {
    let target = build_it8_target(&[]).map_err(ApiError::internal)?;
    Ok(Json(target).into_response())
}

#[derive(Deserialize)]
struct AdaptedRequest {
    class: ImageKeyClass,
    rows: usize,
    cols: usize,
}

async fn adapted_chart(State(state): State<AppState>, body: Body) -> ApiResult<Response> {
    let req: AdaptedRequest = read_json(body, state.config.max_body_bytes).await?;
    let layout = generate_adapted_chart(req.class, req.rows, req.cols).map_err(ApiError::unprocessable)?;
    Ok(Json(layout).into_response())
}
