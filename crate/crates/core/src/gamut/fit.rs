use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::transform::{apply_map_counted, ElementaryTransform, GamutMap};
use super::{GamutBoundary, GamutError};
use crate::colorspace::{hue_distance, lab_lch, LabColor, LchColor};

/// Source chroma at or below this counts as neutral.
pub const CHROMATIC_THRESHOLD: f64 = 0.5;
/// A chromatic color counts as desaturated when it loses more than this.
pub const CHROMA_DECREASE_EPSILON: f64 = 0.1;

/// Objective weights for principles 1 to 5: gray axis, contrast,
/// out-of-gamut share, hue shift and chroma decrease.
pub type Weights = [f64; 5];

pub const DEFAULT_WEIGHTS: Weights = [1.0, 1.0, 10.0, 1.0, 1.0];

const CHUNK: usize = 4096;
// Objectives are compared after rounding to this many units per 1.0.
const OBJECTIVE_QUANTUM: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PrincipleScores {
    /// Largest mapped chroma among neutral source colors.
    pub gray_axis_deviation: f64,
    /// Mapped L* span over the destination L* span; 0 when the destination
    /// span is empty.
    pub luminance_contrast: f64,
    pub oog_fraction: f64,
    /// Mean hue change in degrees over chromatic source colors.
    pub mean_abs_hue_shift: f64,
    pub chroma_decrease_fraction: f64,
    /// Mapped colors whose L* was clamped into [0, 100].
    pub lightness_clamped: usize,
}

#[derive(Default, Clone, Copy)]
struct Partial {
    gray_max: f64,
    l_min: f64,
    l_max: f64,
    outside: usize,
    hue_sum: f64,
    chromatic: usize,
    decreased: usize,
    clamped: usize,
}

fn score_chunk(chunk: &[(LabColor, LchColor)], bd: &GamutBoundary, m: &GamutMap) -> Partial {
    let mut acc = Partial {
        l_min: f64::INFINITY,
        l_max: f64::NEG_INFINITY,
        ..Partial::default()
    };
    for (src, src_lch) in chunk {
        let (q, clamped) = apply_map_counted(m, *src);
        let q_lch = lab_lch(q);
        acc.clamped += clamped as usize;
        acc.l_min = acc.l_min.min(q.l);
        acc.l_max = acc.l_max.max(q.l);
        acc.outside += !bd.contains(q) as usize;
        if src_lch.c <= CHROMATIC_THRESHOLD {
            acc.gray_max = acc.gray_max.max(q_lch.c);
        } else {
            acc.chromatic += 1;
            acc.hue_sum += hue_distance(q_lch.h, src_lch.h);
            acc.decreased += (q_lch.c < src_lch.c - CHROMA_DECREASE_EPSILON) as usize;
        }
    }
    acc
}

fn score_prepared(src: &[(LabColor, LchColor)], bd: &GamutBoundary, m: &GamutMap) -> PrincipleScores {
    // fixed chunks reduced in order keep the sums independent of threading
    let parts: Vec<Partial> = src.par_chunks(CHUNK).map(|c| score_chunk(c, bd, m)).collect();
    let mut t = parts[0];
    for p in &parts[1..] {
        t.gray_max = t.gray_max.max(p.gray_max);
        t.l_min = t.l_min.min(p.l_min);
        t.l_max = t.l_max.max(p.l_max);
        t.outside += p.outside;
        t.hue_sum += p.hue_sum;
        t.chromatic += p.chromatic;
        t.decreased += p.decreased;
        t.clamped += p.clamped;
    }
    let dest_span = bd.l_max() - bd.l_min();
    let per_chromatic = |v: f64| if t.chromatic == 0 { 0.0 } else { v / t.chromatic as f64 };
    PrincipleScores {
        gray_axis_deviation: t.gray_max,
        luminance_contrast: if dest_span > 0.0 {
            (t.l_max - t.l_min) / dest_span
        } else {
            0.0
        },
        oog_fraction: t.outside as f64 / src.len() as f64,
        mean_abs_hue_shift: per_chromatic(t.hue_sum),
        chroma_decrease_fraction: per_chromatic(t.decreased as f64),
        lightness_clamped: t.clamped,
    }
}

fn prepare(src: &[LabColor]) -> Vec<(LabColor, LchColor)> {
    src.iter().map(|p| (*p, lab_lch(*p))).collect()
}

pub fn score_principles(
    src: &[LabColor],
    bd: &GamutBoundary,
    m: &GamutMap,
) -> Result<PrincipleScores, GamutError> {
    if src.is_empty() {
        return Err(GamutError::EmptyPoints);
    }
    Ok(score_prepared(&prepare(src), bd, m))
}

fn validate_weights(w: &Weights) -> Result<(), GamutError> {
    if let Some(v) = w.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(GamutError::InvalidWeights(format!(
            "weights must be finite and nonnegative, got {v}"
        )));
    }
    if w.iter().all(|v| *v == 0.0) {
        return Err(GamutError::InvalidWeights("at least one weight must be positive".into()));
    }
    Ok(())
}

/// Weighted objective, rounded to 12 decimals so that numerically equal
/// scores compare equal.
pub fn objective(s: &PrincipleScores, w: &Weights) -> f64 {
    let raw = w[2] * s.oog_fraction
        + w[0] * s.gray_axis_deviation / 100.0
        + w[1] * (1.0 - s.luminance_contrast).max(0.0)
        + w[3] * s.mean_abs_hue_shift / 180.0
        + w[4] * s.chroma_decrease_fraction;
    (raw * OBJECTIVE_QUANTUM).round() / OBJECTIVE_QUANTUM
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct AutoFitConfig {
    /// Adds a hue rotation to the template.
    pub include_hue_rotate: bool,
    /// Candidates tried on each side of the current value per coordinate.
    pub candidates_per_side: usize,
    /// How many times the step sizes are halved before the search stops.
    pub refinements: usize,
    /// Upper bound on the number of coordinate sweeps.
    pub max_sweeps: usize,
}

impl Default for AutoFitConfig {
    fn default() -> Self {
        AutoFitConfig {
            include_hue_rotate: false,
            candidates_per_side: 4,
            refinements: 12,
            max_sweeps: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AutoFitResult {
    pub map: GamutMap,
    pub scores: PrincipleScores,
    pub objective: f64,
    /// Objective of the identity map followed by the objective after each
    /// sweep.
    pub history: Vec<f64>,
}

// (lower bound, upper bound, identity value, initial step, identity scale)
const PARAMS: [(f64, f64, f64, f64, f64); 4] = [
    (-50.0, 50.0, 0.0, 10.0, 50.0),
    (0.2, 2.0, 1.0, 0.2, 1.0),
    (0.2, 2.0, 1.0, 0.2, 1.0),
    (-45.0, 45.0, 0.0, 10.0, 45.0),
];
// chroma first: it is the step that changes the fewest principles
const SEARCH_ORDER: [usize; 4] = [2, 0, 1, 3];
pub const LIGHTNESS_PIVOT: f64 = 50.0;

fn template(p: &[f64; 4], with_hue: bool) -> GamutMap {
    let mut t = vec![
        ElementaryTransform::LightnessTranslate { d: p[0] },
        ElementaryTransform::LightnessScale {
            s: p[1],
            pivot: LIGHTNESS_PIVOT,
        },
        ElementaryTransform::ChromaScale { s: p[2] },
    ];
    if with_hue {
        t.push(ElementaryTransform::HueRotate { theta: p[3] });
    }
    GamutMap::new(t).expect("search stays inside valid parameter bounds")
}

fn identity_distance(p: &[f64; 4]) -> f64 {
    p.iter()
        .zip(PARAMS)
        .map(|(v, (_, _, id, _, scale))| (v - id).abs() / scale)
        .sum()
}

/// Fits the template `[LightnessTranslate, LightnessScale(pivot 50),
/// ChromaScale]`, optionally followed by `HueRotate`, by coordinate
/// descent over successively refined parameter grids.
///
/// A move is taken when it lowers the objective, or keeps it equal while
/// bringing the parameters closer to the identity map. The search starts
/// at the identity, so the result never scores worse than no mapping.
pub fn auto_fit(
    src: &[LabColor],
    bd: &GamutBoundary,
    weights: &Weights,
    cfg: &AutoFitConfig,
) -> Result<AutoFitResult, GamutError> {
    if src.is_empty() {
        return Err(GamutError::EmptyPoints);
    }
    validate_weights(weights)?;
    if cfg.candidates_per_side == 0 {
        return Err(GamutError::InvalidConfig(
            "at least one candidate per side is required".into(),
        ));
    }
    let prepared = prepare(src);
    let with_hue = cfg.include_hue_rotate;
    let eval = |p: &[f64; 4]| {
        let scores = score_prepared(&prepared, bd, &template(p, with_hue));
        (objective(&scores, weights), scores)
    };

    let mut params = PARAMS.map(|(_, _, id, _, _)| id);
    let mut steps = PARAMS.map(|(_, _, _, step, _)| step);
    let (mut best, mut scores) = eval(&params);
    let mut history = vec![best];
    let coords: Vec<usize> = SEARCH_ORDER
        .into_iter()
        .filter(|&i| with_hue || i != 3)
        .collect();
    let k = cfg.candidates_per_side as i64;

    let mut refinements = 0;
    for _ in 0..cfg.max_sweeps {
        let mut moved = false;
        for &i in &coords {
            let (lo, hi, ..) = PARAMS[i];
            let mut choice: Option<([f64; 4], f64, PrincipleScores)> = None;
            for j in (-k..=k).filter(|&j| j != 0) {
                let mut cand = params;
                cand[i] = (params[i] + j as f64 * steps[i]).clamp(lo, hi);
                if cand[i] == params[i] {
                    continue;
                }
                let (obj, sc) = eval(&cand);
                let (ref_obj, ref_p) = match &choice {
                    Some((p, o, _)) => (*o, *p),
                    None => (best, params),
                };
                if obj < ref_obj || (obj == ref_obj && identity_distance(&cand) < identity_distance(&ref_p)) {
                    choice = Some((cand, obj, sc));
                }
            }
            if let Some((p, obj, sc)) = choice {
                params = p;
                best = obj;
                scores = sc;
                moved = true;
            }
        }
        history.push(best);
        if !moved {
            if refinements == cfg.refinements {
                break;
            }
            refinements += 1;
            steps.iter_mut().for_each(|s| *s /= 2.0);
        }
    }
    Ok(AutoFitResult {
        map: template(&params, with_hue),
        scores,
        objective: best,
        history,
    })
}
