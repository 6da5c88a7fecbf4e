use prepress_core::colorspace::{
    delta_e76, lab_lch, lab_to_rgb, rgb_to_lab, separate_to_cmyk, LabColor, RgbColor, SeparationParams, D65,
};
use prepress_core::gamut::{
    apply_map, auto_fit, gamut_from_points, objective, score_principles, AutoFitConfig,
    ElementaryTransform, GamutBoundary, GamutMap, DEFAULT_WEIGHTS,
};
use proptest::prelude::*;

fn rgb() -> impl Strategy<Value = RgbColor> {
    (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(r, g, b)| RgbColor { r, g, b })
}

fn separation() -> impl Strategy<Value = SeparationParams> {
    (0.0..=1.0f64, 0.0..=1.0f64, 0.01..=1.0f64, 1.0..=4.0f64)
        .prop_map(|(g, s, w, t)| SeparationParams::new(g, s, w, t).unwrap())
}

fn lab() -> impl Strategy<Value = LabColor> {
    (0.0..=100.0f64, -128.0..128.0f64, -128.0..128.0f64).prop_map(|(l, a, b)| LabColor::new(l, a, b))
}

fn lab_points(max: usize) -> impl Strategy<Value = Vec<LabColor>> {
    proptest::collection::vec(lab(), 1..max)
}

/// Per-cell maxima by scanning every point against explicit cell edges.
fn brute_force_cells(points: &[LabColor], h: usize, b: usize) -> Vec<Option<f64>> {
    let mut cells = Vec::with_capacity(h * b);
    for s in 0..h {
        let (h0, h1) = (s as f64 * 360.0 / h as f64, (s + 1) as f64 * 360.0 / h as f64);
        for band in 0..b {
            let (l0, l1) = (band as f64 * 100.0 / b as f64, (band + 1) as f64 * 100.0 / b as f64);
            let best = points
                .iter()
                .map(|p| lab_lch(*p))
                .filter(|q| q.h >= h0 && q.h < h1)
                .filter(|q| (q.l >= l0 || band == 0) && (q.l < l1 || band == b - 1))
                .map(|q| q.c)
                .reduce(f64::max);
            cells.push(best);
        }
    }
    cells
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rgb_lab_round_trip(c in rgb()) {
        let (back, inside) = lab_to_rgb(rgb_to_lab(c, D65).unwrap(), D65);
        prop_assert!(inside || [c.r, c.g, c.b].iter().any(|v| *v == 0.0 || *v == 1.0));
        for (x, y) in back.to_array().iter().zip(c.to_array()) {
            prop_assert!((x - y).abs() < 1e-7);
        }
    }

    #[test]
    fn grays_are_neutral_and_lightness_rises(v in 0.0..1.0f64, dv in 1e-6..=1.0f64) {
        let lo = rgb_to_lab(RgbColor::gray(v), D65).unwrap();
        let hi = rgb_to_lab(RgbColor::gray((v + dv).min(1.0)), D65).unwrap();
        prop_assert!(lo.a.abs() < 1e-9 && lo.b.abs() < 1e-9);
        prop_assert!(hi.l > lo.l);
    }

    #[test]
    fn delta_e_is_a_metric(p in lab(), q in lab(), r in lab()) {
        let (pq, qp) = (delta_e76(p, q), delta_e76(q, p));
        prop_assert!(pq >= 0.0);
        prop_assert_eq!(pq, qp);
        prop_assert_eq!(delta_e76(p, p), 0.0);
        prop_assert!(p == q || pq > 0.0);
        prop_assert!(pq <= delta_e76(p, r) + delta_e76(r, q) + 1e-9);
    }

    #[test]
    fn separation_respects_ink_limit(c in rgb(), p in separation()) {
        let cmyk = separate_to_cmyk(c, &p);
        prop_assert!(cmyk.total_ink() <= p.total_ink_limit + 1e-9);
        for v in [cmyk.c, cmyk.m, cmyk.y, cmyk.k] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn full_gcr_on_gray_balances_cmy(v in 0.0..=1.0f64, s in 0.0..=1.0f64, w in 0.01..=1.0f64) {
        let p = SeparationParams::new(1.0, s, w, 4.0).unwrap();
        let cmyk = separate_to_cmyk(RgbColor::gray(v), &p);
        prop_assert_eq!(cmyk.c, cmyk.m);
        prop_assert_eq!(cmyk.m, cmyk.y);
        let ramp = SeparationParams::new(1.0, 0.0, 1.0, 4.0).unwrap();
        prop_assert!(v == 1.0 || separate_to_cmyk(RgbColor::gray(v), &ramp).k > 0.0);
    }

    #[test]
    fn segment_maxima_equal_brute_force(points in lab_points(400), h in 4usize..40, b in 3usize..20) {
        let bd = gamut_from_points(&points, h, b).unwrap();
        for (i, cell) in brute_force_cells(&points, h, b).into_iter().enumerate() {
            let (s, band) = (i / b, i % b);
            match cell {
                Some(m) => {
                    prop_assert_eq!(bd.max_chroma(s, band), m);
                    prop_assert!(!bd.is_interpolated(s, band));
                }
                None => prop_assert!(bd.is_interpolated(s, band)),
            }
        }
    }

    #[test]
    fn auto_fit_never_worse_than_identity(points in lab_points(60), k in 0.5..1.5f64) {
        let bd = gamut_from_points(&points, 12, 6).unwrap();
        let src: Vec<_> = points.iter().map(|p| LabColor::new(p.l, k * p.a, k * p.b)).collect();
        let cfg = AutoFitConfig { refinements: 4, ..AutoFitConfig::default() };
        let fit = auto_fit(&src, &bd, &DEFAULT_WEIGHTS, &cfg).unwrap();
        let id = score_principles(&src, &bd, &GamutMap::identity()).unwrap();
        prop_assert!(fit.objective <= objective(&id, &DEFAULT_WEIGHTS));
        prop_assert!(fit.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn mapped_neutrals_stay_on_axis(
        d in -50.0..50.0f64, sl in 0.2..2.0f64, sc in 0.2..2.0f64, theta in -45.0..45.0f64,
        l in 0.0..=100.0f64,
    ) {
        let m = GamutMap::new(vec![
            ElementaryTransform::LightnessTranslate { d },
            ElementaryTransform::LightnessScale { s: sl, pivot: 50.0 },
            ElementaryTransform::ChromaScale { s: sc },
            ElementaryTransform::HueRotate { theta },
        ]).unwrap();
        let q = apply_map(&m, LabColor::new(l, 0.0, 0.0));
        prop_assert!(q.chroma() < 1e-9);
        prop_assert!((0.0..=100.0).contains(&q.l));
    }
}

#[test]
fn boundary_survives_json() {
    let pts: Vec<_> = (0..50)
        .map(|i| LabColor::new(i as f64 * 2.0, (i as f64).sin() * 40.0, (i as f64).cos() * 40.0))
        .collect();
    let bd = gamut_from_points(&pts, 36, 18).unwrap();
    let back: GamutBoundary = serde_json::from_str(&serde_json::to_string(&bd).unwrap()).unwrap();
    assert_eq!(back, bd);
}
