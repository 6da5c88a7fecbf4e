//! Acceptance suite. Runs every criterion, prints one line per criterion
//! and exits nonzero when any of them fails.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tower::ServiceExt;

use prepress_core::classification::{classify_key, lstar_histogram, ImageKeyClass};
use prepress_core::colorspace::{
    delta_e76, lab_lch, lab_to_rgb, rgb_to_lab, separate_to_cmyk, LabColor, RgbColor,
    SeparationParams, D65,
};
use prepress_core::gamut::{
    apply_map, auto_fit, gamut_from_points, score_principles, AutoFitConfig, ElementaryTransform,
    GamutMap, DEFAULT_WEIGHTS,
};
use prepress_core::io::{parse_cgats, read_ppm, write_ppm, RasterImage};
use prepress_core::testchart::{
    build_it8_target, characterize_device, profile_eval, Measurement, MeasurementSet, PatchRole,
    TONE_SCALES,
};
use prepress_service::{app, ServiceConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("took {:.2} s, limit {limit_s} s", elapsed.as_secs_f64())
    })
}

fn rgb(rng: &mut ChaCha8Rng) -> RgbColor {
    RgbColor {
        r: rng.random(),
        g: rng.random(),
        b: rng.random(),
    }
}

fn color_round_trip() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let c = rgb(&mut rng);
        let (back, ok) = lab_to_rgb(rgb_to_lab(c, D65).unwrap(), D65);
        ensure(ok, || format!("{c:?} left the gamut on the way back"))?;
        for (x, y) in c.to_array().into_iter().zip(back.to_array()) {
            worst = worst.max((x - y).abs());
        }
    }
    let elapsed = t.elapsed();
    ensure(worst < 1e-7, || format!("max channel error {worst:e}"))?;
    let white = rgb_to_lab(RgbColor::gray(1.0), D65).unwrap();
    let black = rgb_to_lab(RgbColor::gray(0.0), D65).unwrap();
    ensure(delta_e76(white, LabColor::new(100.0, 0.0, 0.0)) <= 1e-9, || format!("white {white:?}"))?;
    ensure(delta_e76(black, LabColor::new(0.0, 0.0, 0.0)) <= 1e-9, || format!("black {black:?}"))?;
    within(elapsed, 1.0)?;
    Ok(format!("max channel error {worst:.1e}"))
}

fn key_borders() -> Outcome {
    let cases = [
        (20.0, ImageKeyClass::LowKey),
        (50.0, ImageKeyClass::NormalKey),
        (80.0, ImageKeyClass::HighKey),
        (40.0, ImageKeyClass::LowKey),
        (60.0, ImageKeyClass::NormalKey),
    ];
    for (l, expected) in cases {
        let (c, ok) = lab_to_rgb(LabColor::new(l, 0.0, 0.0), D65);
        ensure(ok, || format!("L* = {l} is not an sRGB gray"))?;
        let image = RasterImage::filled(16, 16, c).unwrap();
        let got = classify_key(&lstar_histogram(&image, 10).unwrap(), false).chosen;
        ensure(got == expected, || format!("L* = {l}: {got:?}, expected {expected:?}"))?;
    }
    Ok("L* 20/50/80/40/60 -> low/normal/high/low/normal".into())
}

fn it8_structure() -> Outcome {
    let target = build_it8_target(&[]).unwrap();
    let layout = target.layout();
    let counts = [PatchRole::Standardized, PatchRole::ToneScale, PatchRole::Vendor].map(|r| layout.count_role(r));
    ensure(layout.patches().len() == 264, || format!("{} patches", layout.patches().len()))?;
    ensure(counts == [144, 84, 36], || format!("roles {counts:?}"))?;
    for (i, name) in TONE_SCALES.iter().enumerate() {
        let scale: Vec<_> = target.tone_scale(i).iter().map(|p| lab_lch(p.target)).collect();
        ensure(scale.len() == 12, || format!("{name}: {} steps", scale.len()))?;
        ensure(scale.windows(2).all(|w| w[1].c >= w[0].c), || format!("{name}: chroma decreases"))?;
        let chromatic: Vec<_> = scale.iter().filter(|q| q.c > 1e-9).collect();
        ensure(chromatic.windows(2).all(|w| (w[1].h - w[0].h).abs() < 1e-9), || {
            format!("{name}: hue changes")
        })?;
    }
    Ok("264 = 144 + 84 + 36, 7 tone scales of 12".into())
}

fn separation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let params: Vec<SeparationParams> = (0..20)
        .map(|_| {
            SeparationParams::new(
                rng.random(),
                rng.random(),
                rng.random_range(0.01..=1.0),
                rng.random_range(1.0..=4.0),
            )
            .unwrap()
        })
        .collect();
    let inputs: Vec<RgbColor> = (0..100_000).map(|_| rgb(&mut rng)).collect();
    let t = Instant::now();
    let mut worst = f64::NEG_INFINITY;
    for p in &params {
        for &c in &inputs {
            worst = worst.max(separate_to_cmyk(c, p).total_ink() - p.total_ink_limit);
        }
    }
    let elapsed = t.elapsed();
    ensure(worst <= 1e-9, || format!("ink limit exceeded by {worst:e}"))?;
    for p in &params {
        let full = SeparationParams {
            gcr_strength: 1.0,
            ..*p
        };
        for i in 0..=255 {
            let k = separate_to_cmyk(RgbColor::gray(i as f64 / 255.0), &full);
            ensure(k.c == k.m && k.m == k.y, || format!("gray {i}: {k:?}"))?;
        }
    }
    within(elapsed, 5.0)?;
    Ok(format!("2e6 separations in {:.2} s", elapsed.as_secs_f64()))
}

/// Per-cell maxima from explicit cell edges, scanning every point per cell.
fn brute_force_cells(points: &[LabColor], h: usize, b: usize) -> Vec<Option<f64>> {
    let lch: Vec<_> = points.iter().map(|p| lab_lch(*p)).collect();
    let mut cells = Vec::with_capacity(h * b);
    for s in 0..h {
        let (h0, h1) = (s as f64 * 360.0 / h as f64, (s + 1) as f64 * 360.0 / h as f64);
        for band in 0..b {
            let (l0, l1) = (band as f64 * 100.0 / b as f64, (band + 1) as f64 * 100.0 / b as f64);
            let best = lch
                .iter()
                .filter(|q| q.h >= h0 && q.h < h1)
                .filter(|q| (q.l >= l0 || band == 0) && (q.l < l1 || band == b - 1))
                .map(|q| q.c)
                .reduce(f64::max);
            cells.push(best);
        }
    }
    cells
}

fn segment_maxima() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for set in 0..5 {
        let n = rng.random_range(1..=10_000);
        let points: Vec<LabColor> = (0..n)
            .map(|_| {
                LabColor::new(
                    rng.random_range(0.0..=100.0),
                    rng.random_range(-128.0..128.0),
                    rng.random_range(-128.0..128.0),
                )
            })
            .collect();
        let (h, b) = (rng.random_range(4..=72), rng.random_range(3..=36));
        let bd = gamut_from_points(&points, h, b).unwrap();
        let oracle = brute_force_cells(&points, h, b);
        for s in 0..h {
            for band in 0..b {
                match oracle[s * b + band] {
                    Some(c) => ensure(bd.max_chroma(s, band) == c && !bd.is_interpolated(s, band), || {
                        format!("set {set} cell ({s}, {band}): {} vs {c}", bd.max_chroma(s, band))
                    })?,
                    None => ensure(bd.is_interpolated(s, band), || {
                        format!("set {set} cell ({s}, {band}) is empty but not marked")
                    })?,
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} cells equal"))
}

fn random_template(rng: &mut ChaCha8Rng) -> GamutMap {
    let mut t = vec![
        ElementaryTransform::LightnessTranslate {
            d: rng.random_range(-50.0..=50.0),
        },
        ElementaryTransform::LightnessScale {
            s: rng.random_range(0.2..=2.0),
            pivot: rng.random_range(0.0..=100.0),
        },
        ElementaryTransform::ChromaScale {
            s: rng.random_range(0.2..=2.0),
        },
    ];
    if rng.random() {
        t.push(ElementaryTransform::HueRotate {
            theta: rng.random_range(-180.0..=180.0),
        });
    }
    GamutMap::new(t).unwrap()
}

fn gray_axis() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m = random_template(&mut rng);
        for i in 0..=100 {
            let out = apply_map(&m, LabColor::new(i as f64, 0.0, 0.0));
            worst = worst.max(out.chroma());
        }
    }
    ensure(worst < 1e-9, || format!("neutral output chroma {worst:e}"))?;
    Ok(format!("max neutral chroma {worst:.1e}"))
}

fn srgb_cube(n: usize) -> Vec<LabColor> {
    let top = (n - 1) as f64;
    (0..n * n * n)
        .map(|i| {
            let c = RgbColor {
                r: (i / (n * n)) as f64 / top,
                g: ((i / n) % n) as f64 / top,
                b: (i % n) as f64 / top,
            };
            rgb_to_lab(c, D65).unwrap()
        })
        .collect()
}

fn auto_fit_inflated() -> Outcome {
    let dest = srgb_cube(10);
    let bd = gamut_from_points(&dest, 36, 18).unwrap();
    let src: Vec<_> = dest.iter().map(|p| LabColor::new(p.l, 1.2 * p.a, 1.2 * p.b)).collect();
    let t = Instant::now();
    let fit = auto_fit(&src, &bd, &DEFAULT_WEIGHTS, &AutoFitConfig::default()).unwrap();
    let elapsed = t.elapsed();
    let s = fit.map.chroma_scale().unwrap();
    let oog = fit.scores.oog_fraction;
    ensure((0.78..=0.90).contains(&s), || format!("chroma scale {s}"))?;
    ensure(oog <= 0.05, || format!("oog fraction {oog}"))?;
    ensure(fit.history.windows(2).all(|w| w[1] <= w[0]), || {
        format!("history increases: {:?}", fit.history)
    })?;
    // smallest pure chroma factor that clears the gamut
    let clear = (0..=200)
        .map(|i| 1.0 - i as f64 * 0.0025)
        .find(|&k| {
            let m = GamutMap::new(vec![ElementaryTransform::ChromaScale { s: k }]).unwrap();
            score_principles(&src, &bd, &m).unwrap().oog_fraction == 0.0
        })
        .unwrap_or(0.0);
    within(elapsed, 10.0)?;
    Ok(format!(
        "scale {s:.4} (brute force {clear:.4}), oog {oog}, {} sweeps in {:.2} s",
        fit.history.len() - 1,
        elapsed.as_secs_f64()
    ))
}

fn affine(c: RgbColor) -> LabColor {
    LabColor::new(
        10.0 + 30.0 * c.r + 25.0 * c.g + 20.0 * c.b,
        5.0 + 60.0 * c.r - 70.0 * c.g + 10.0 * c.b,
        -5.0 + 40.0 * c.r + 50.0 * c.g - 90.0 * c.b,
    )
}

fn characterization() -> Outcome {
    let node = |i: usize| i as f64 / 4.0;
    let entries: Vec<Measurement> = (0..125)
        .map(|i| {
            let d = RgbColor {
                r: node(i / 25),
                g: node((i / 5) % 5),
                b: node(i % 5),
            };
            Measurement::new(d, affine(d))
        })
        .collect();
    let set = MeasurementSet::new(entries.clone(), Default::default()).unwrap();
    let profile = characterize_device(&set, 9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mean = (0..100)
        .map(|_| {
            let probe = rgb(&mut rng);
            delta_e76(profile_eval(&profile, probe), affine(probe))
        })
        .sum::<f64>()
        / 100.0;
    ensure(mean < 1.0, || format!("mean dE76 {mean}"))?;
    for (i, e) in entries.iter().enumerate() {
        let at = profile.node(2 * (i / 25), 2 * ((i / 5) % 5), 2 * (i % 5));
        ensure(at == e.measured && profile_eval(&profile, e.device) == e.measured, || {
            format!("measurement {i} not reproduced")
        })?;
    }
    Ok(format!("mean dE76 {mean:.1e}, 125 nodes exact"))
}

const CGATS: &str = "CGATS.17\nORIGINATOR \"acceptance\"\nBEGIN_DATA_FORMAT\n\
    SAMPLE_ID RGB_R RGB_G RGB_B LAB_L LAB_A LAB_B\nEND_DATA_FORMAT\nBEGIN_DATA\n\
    1 255 255 255 100 0 0\n2 0 0 0 0 0 0\n3 255 0 0 53.24 80.09 67.2\nEND_DATA\n";

fn run_cli(args: &[&str]) -> Result<(), String> {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("prepress").chain(args.iter().copied());
    match prepress_cli::run(argv, &mut out, &mut err) {
        0 => Ok(()),
        code => Err(format!("{args:?} exited {code}: {}", String::from_utf8_lossy(&err))),
    }
}

fn cli_pipeline(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let p = |name: &str| dir.join(name).to_str().unwrap().to_string();
    let mut text = String::from("BEGIN_DATA_FORMAT\nRGB_R RGB_G RGB_B LAB_L LAB_A LAB_B\nEND_DATA_FORMAT\nBEGIN_DATA\n");
    for i in 0..27 {
        let d = [i / 9, (i / 3) % 3, i % 3].map(|v| v as f64 * 127.5);
        let lab = rgb_to_lab(RgbColor::new(d[0] / 255.0, d[1] / 255.0, d[2] / 255.0).unwrap(), D65).unwrap();
        text.push_str(&format!("{} {} {} {} {} {}\n", d[0], d[1], d[2], lab.l, lab.a / 1.1, lab.b / 1.1));
    }
    fs::write(p("device.cgats"), text + "END_DATA\n").map_err(|e| e.to_string())?;
    run_cli(&["chart", "adapted", "--class", "high-key", "--rows", "6", "--cols", "8", "-o", &p("chart.json")])?;
    run_cli(&["chart", "render", &p("chart.json"), "--patch-px", "3", "-o", &p("chart.ppm")])?;
    run_cli(&["characterize", &p("device.cgats"), "--grid", "5", "-o", &p("profile.json")])?;
    run_cli(&["gamut", "mesh", "--profile", &p("profile.json"), "-o", &p("mesh.json")])?;
    run_cli(&[
        "map", "auto", "--image", &p("chart.ppm"), "--profile", &p("profile.json"),
        "-o", &p("mapped.ppm"), "--report", &p("fit.json"),
    ])?;
    run_cli(&["separate", &p("mapped.ppm"), "--class", "high-key", "-o", &p("cmyk.json")])?;
    run_cli(&["classify", &p("mapped.ppm"), "--report", &p("class.json")])?;
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| e.to_string())? {
        let entry = entry.map_err(|e| e.to_string())?;
        let bytes = fs::read(entry.path()).map_err(|e| e.to_string())?;
        files.push((entry.file_name().to_string_lossy().into_owned(), bytes));
    }
    files.sort();
    Ok(files)
}

fn formats() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let (w, h) = (rng.random_range(1..=17), rng.random_range(1..=9));
        let pixels = (0..w * h).map(|_| rgb(&mut rng)).collect();
        let img = RasterImage::new(w, h, pixels).unwrap();
        let bytes = write_ppm(&img);
        let back = read_ppm(&bytes).map_err(|e| e.to_string())?;
        ensure(write_ppm(&back) == bytes, || "PPM rewrite differs".into())?;
        let err = img
            .pixels()
            .iter()
            .zip(back.pixels())
            .flat_map(|(a, b)| a.to_array().into_iter().zip(b.to_array()))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ensure(err <= 0.5 / 255.0 + 1e-12, || format!("PPM quantization error {err}"))?;
    }
    let raster = [7u8, 8, 9, 200, 201, 202];
    let mut plain = b"P6\n2 1\n255\n".to_vec();
    plain.extend_from_slice(&raster);
    let mut commented = b"P6\n# comment\n2 # width\n1\n# maxval\n255\n".to_vec();
    commented.extend_from_slice(&raster);
    ensure(read_ppm(&plain) == read_ppm(&commented) && read_ppm(&plain).is_ok(), || {
        "PPM comments change the image".into()
    })?;

    let base = parse_cgats(CGATS).map_err(|e| e.to_string())?;
    let crlf = parse_cgats(&CGATS.replace('\n', "\r\n")).map_err(|e| e.to_string())?;
    let comments = parse_cgats(&CGATS.replace("BEGIN_DATA\n", "# measured today\nBEGIN_DATA\n\n# rows\n"))
        .map_err(|e| e.to_string())?;
    ensure(base == crlf, || "CRLF changes the CGATS result".into())?;
    ensure(base == comments, || "comments change the CGATS result".into())?;
    ensure(base.entries().len() == 3 && base.entries()[2].device.r == 1.0, || {
        "CGATS rows misread".into()
    })?;

    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = cli_pipeline(a.path())?;
    let second = cli_pipeline(b.path())?;
    ensure(first == second, || "CLI reruns differ".into())?;
    Ok(format!("PPM/CGATS suites pass, {} CLI outputs byte-identical", first.len()))
}

async fn call(app: &Router, method: &str, uri: &str, body: impl Into<Body>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).body(body.into()).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn expect_status(got: StatusCode, want: StatusCode, what: &str) -> Result<(), String> {
    ensure(got == want, || format!("{what}: {got}, expected {want}"))
}

async fn service_contract() -> Outcome {
    let app = app(ServiceConfig::default());
    let pixels = srgb_cube(6)
        .into_iter()
        .map(|lab| lab_to_rgb(lab, D65).0)
        .collect();
    let img = RasterImage::new(36, 6, pixels).unwrap();
    let (status, v) = call(&app, "POST", "/api/assets?kind=image", write_ppm(&img)).await;
    expect_status(status, StatusCode::CREATED, "image ingest")?;
    let image = v["id"].as_str().unwrap().to_string();
    let mut cgats = String::from("BEGIN_DATA_FORMAT\nRGB_R RGB_G RGB_B LAB_L LAB_A LAB_B\nEND_DATA_FORMAT\nBEGIN_DATA\n");
    for i in 0..8 {
        let d = [i / 4, (i / 2) % 2, i % 2].map(|v| v as f64);
        let lab = rgb_to_lab(RgbColor::new(d[0], d[1], d[2]).unwrap(), D65).unwrap();
        let [r, g, b] = d.map(|v| v * 255.0);
        cgats.push_str(&format!("{r} {g} {b} {} {} {}\n", lab.l, 0.8 * lab.a, 0.8 * lab.b));
    }
    cgats.push_str("END_DATA\n");
    let (status, v) = call(&app, "POST", "/api/assets?kind=profile&grid=2", cgats).await;
    expect_status(status, StatusCode::CREATED, &format!("profile ingest {v}"))?;
    let profile = v["id"].as_str().unwrap().to_string();

    let request = |i: usize| {
        json!({"imageId": image, "profileId": profile, "transforms": [
            {"type": "lightnessTranslate", "d": i as f64 - 4.0},
            {"type": "chromaScale", "s": 0.5 + 0.1 * i as f64},
            {"type": "hueRotate", "theta": 5.0 * i as f64}
        ]})
        .to_string()
    };
    let (s1, first) = call(&app, "POST", "/api/map/preview", request(3)).await;
    let (s2, second) = call(&app, "POST", "/api/map/preview", request(3)).await;
    expect_status(s1, StatusCode::OK, "preview")?;
    ensure(s2 == s1 && first == second, || "identical previews differ".into())?;

    let (status, _) = call(&app, "GET", "/api/assets/image-999/classification", Body::empty()).await;
    expect_status(status, StatusCode::NOT_FOUND, "unknown asset")?;
    let bad = json!({"imageId": image, "profileId": profile, "transforms": [{"type": "chromaScale", "s": 0}]});
    let (status, _) = call(&app, "POST", "/api/map/preview", bad.to_string()).await;
    expect_status(status, StatusCode::UNPROCESSABLE_ENTITY, "invalid transform")?;
    let (status, _) = call(&app, "POST", "/api/assets?kind=image", "P3\n1 1\n255\n0 0 0\n").await;
    expect_status(status, StatusCode::UNPROCESSABLE_ENTITY, "ASCII pixmap")?;
    let small = prepress_service::app(ServiceConfig {
        max_body_bytes: 256,
        ..ServiceConfig::default()
    });
    let (status, _) = call(&small, "POST", "/api/assets?kind=image", write_ppm(&img)).await;
    expect_status(status, StatusCode::PAYLOAD_TOO_LARGE, "oversized body")?;

    let mut serial = Vec::new();
    for i in 0..8 {
        serial.push(call(&app, "POST", "/api/map/preview", request(i)).await);
    }
    let tasks: Vec<_> = (0..8)
        .map(|i| {
            let app = app.clone();
            let body = request(i);
            tokio::spawn(async move { call(&app, "POST", "/api/map/preview", body).await })
        })
        .collect();
    for (i, task) in tasks.into_iter().enumerate() {
        let got = task.await.map_err(|e| e.to_string())?;
        ensure(got == serial[i], || format!("parallel preview {i} differs from serial"))?;
        expect_status(got.0, StatusCode::OK, "parallel preview")?;
    }
    Ok("deterministic previews, 404/422/413, 8 parallel == serial".into())
}

fn service() -> Outcome {
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    rt.block_on(service_contract())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("color round trip", color_round_trip),
        ("key borders", key_borders),
        ("IT8 structure", it8_structure),
        ("separation", separation),
        ("segment-maxima oracle", segment_maxima),
        ("gray-axis preservation", gray_axis),
        ("auto-fit", auto_fit_inflated),
        ("characterization", characterization),
        ("formats", formats),
        ("service contract", service),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS  {name:<24} {detail} [{ms} ms]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<24} {detail} [{ms} ms]");
            }
        }
    }
    println!("{} of {} criteria passed", 10 - failed, 10);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
