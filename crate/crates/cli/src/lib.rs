//! The `prepress` command line.
//!
//! Exit codes: 0 on success, 1 when an input cannot be read or a library
//! call rejects it, 2 for usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use prepress_core::classification::{
    classify_key, lstar_histogram, recommend_separation, ImageKeyClass, DEFAULT_STEP_COUNT,
};
use prepress_core::colorspace::{separate_to_cmyk, CmykColor, SeparationParams};
use prepress_core::gamut::{
    auto_fit, boundary_mesh, gamut_from_points, image_lab_points, map_image, AutoFitConfig,
    DEFAULT_BANDS, DEFAULT_SECTORS, DEFAULT_WEIGHTS,
};
use prepress_core::io::{parse_cgats, read_ppm, write_ppm, RasterImage};
use prepress_core::testchart::{
    build_it8_target, characterize_device, generate_adapted_chart, profile_gamut_points,
    render_chart, DeviceProfile, TestChartLayout,
};

/// Device profiles are sampled this densely per axis to find their gamut.
pub const PROFILE_SAMPLES: usize = 17;
pub const DEFAULT_GRID: usize = 9;

#[derive(Parser, Debug)]
#[command(name = "prepress", version, about = "Prepress color toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify an image as low, normal or high key from its L* histogram
    Classify {
        image: PathBuf,
        #[arg(long, default_value_t = DEFAULT_STEP_COUNT)]
        steps: usize,
        /// Drop a dominant near-white background bin before classifying
        #[arg(long)]
        exclude_bg: bool,
        /// Also write the class masses as JSON
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generate or render test charts
    #[command(subcommand)]
    Chart(ChartCommand),
    /// Build a device profile from CGATS measurements
    Characterize {
        measurements: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Gamut inspection
    #[command(subcommand)]
    Gamut(GamutCommand),
    /// Gamut mapping
    #[command(subcommand)]
    Map(MapCommand),
    /// Separate an image into CMYK with the preset for an image class
    Separate {
        image: PathBuf,
        #[arg(long)]
        class: ImageKeyClass,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum ChartCommand {
    /// Chart whose patches concentrate in the L* range of one image class
    Adapted {
        #[arg(long)]
        class: ImageKeyClass,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// The 12x22 IT8 scanner target
    It8 {
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Render a layout to a PPM image
    Render {
        layout: PathBuf,
        #[arg(long, default_value_t = 32)]
        patch_px: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GamutSource {
    #[arg(long)]
    image: Option<PathBuf>,
    #[arg(long)]
    profile: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GamutCommand {
    /// Export the gamut surface of an image or a profile as a mesh
    Mesh {
        #[command(flatten)]
        source: GamutSource,
        #[arg(long, default_value_t = DEFAULT_SECTORS)]
        sectors: usize,
        #[arg(long, default_value_t = DEFAULT_BANDS)]
        bands: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum MapCommand {
    /// Fit a gamut map of the image into the profile's gamut and apply it
    Auto {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        /// Gray-axis weight
        #[arg(long, default_value_t = DEFAULT_WEIGHTS[0])]
        w1: f64,
        /// Lightness contrast weight
        #[arg(long, default_value_t = DEFAULT_WEIGHTS[1])]
        w2: f64,
        /// Out-of-gamut weight
        #[arg(long, default_value_t = DEFAULT_WEIGHTS[2])]
        w3: f64,
        /// Hue shift weight
        #[arg(long, default_value_t = DEFAULT_WEIGHTS[3])]
        w4: f64,
        /// Chroma decrease weight
        #[arg(long, default_value_t = DEFAULT_WEIGHTS[4])]
        w5: f64,
        /// Let the fit rotate hues as well
        #[arg(long)]
        hue_rotate: bool,
        #[arg(short, long)]
        output: PathBuf,
        /// Fitted map, scores and objective history as JSON
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return e.exit_code();
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            1
        }
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_bytes(path, &bytes)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_slice(&read_bytes(path)?).with_context(|| format!("invalid JSON in {}", path.display()))
}

fn load_image(path: &Path) -> Result<RasterImage> {
    read_ppm(&read_bytes(path)?).with_context(|| format!("cannot decode {}", path.display()))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Separation {
    width: usize,
    height: usize,
    class: ImageKeyClass,
    params: SeparationParams,
    pixels: Vec<CmykColor>,
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Classify {
            image,
            steps,
            exclude_bg,
            report,
        } => {
            let img = load_image(&image)?;
            let r = classify_key(&lstar_histogram(&img, steps)?, exclude_bg);
            writeln!(out, "{}", r.chosen)?;
            writeln!(out, "high-key mass   {:.6}", r.high_mass)?;
            writeln!(out, "normal-key mass {:.6}", r.normal_mass)?;
            writeln!(out, "low-key mass    {:.6}", r.low_mass)?;
            if let Some(bin) = r.excluded_bin {
                writeln!(out, "excluded background bin {bin}")?;
            }
            if let Some(path) = report {
                write_json(&path, &r)?;
            }
        }
        Command::Chart(ChartCommand::Adapted {
            class,
            rows,
            cols,
            output,
        }) => write_json(&output, &generate_adapted_chart(class, rows, cols)?)?,
        Command::Chart(ChartCommand::It8 { output }) => {
            write_json(&output, &build_it8_target(&[])?)?
        }
        Command::Chart(ChartCommand::Render {
            layout,
            patch_px,
            output,
        }) => {
            let layout: TestChartLayout = read_json(&layout)?;
            let rendered = render_chart(&layout, patch_px)?;
            write_bytes(&output, &write_ppm(&rendered.image))?;
            for (row, col) in rendered.clamped {
                writeln!(out, "patch ({row}, {col}) clamped into sRGB")?;
            }
        }
        Command::Characterize {
            measurements,
            grid,
            output,
        } => {
            let text = String::from_utf8(read_bytes(&measurements)?)
                .with_context(|| format!("{} is not UTF-8 text", measurements.display()))?;
            let set = parse_cgats(&text).with_context(|| format!("cannot parse {}", measurements.display()))?;
            write_json(&output, &characterize_device(&set, grid)?)?;
        }
        Command::Gamut(GamutCommand::Mesh {
            source,
            sectors,
            bands,
            output,
        }) => {
            let points = match (source.image, source.profile) {
                (Some(image), _) => image_lab_points(&load_image(&image)?),
                (None, Some(profile)) => {
                    profile_gamut_points(&read_json::<DeviceProfile>(&profile)?, PROFILE_SAMPLES)?
                }
                (None, None) => unreachable!("clap requires one source"),
            };
            write_json(&output, &boundary_mesh(&gamut_from_points(&points, sectors, bands)?))?;
        }
        Command::Map(MapCommand::Auto {
            image,
            profile,
            w1,
            w2,
            w3,
            w4,
            w5,
            hue_rotate,
            output,
            report,
        }) => {
            let img = load_image(&image)?;
            let profile: DeviceProfile = read_json(&profile)?;
            let dest = gamut_from_points(
                &profile_gamut_points(&profile, PROFILE_SAMPLES)?,
                DEFAULT_SECTORS,
                DEFAULT_BANDS,
            )?;
            let cfg = AutoFitConfig {
                include_hue_rotate: hue_rotate,
                ..AutoFitConfig::default()
            };
            let fit = auto_fit(&image_lab_points(&img), &dest, &[w1, w2, w3, w4, w5], &cfg)?;
            write_bytes(&output, &write_ppm(&map_image(&img, &fit.map)))?;
            writeln!(
                out,
                "objective {:.6} -> {:.6}, out of gamut {:.4}",
                fit.history[0], fit.objective, fit.scores.oog_fraction
            )?;
            if let Some(path) = report {
                write_json(&path, &fit)?;
            }
        }
        Command::Separate {
            image,
            class,
            output,
        } => {
            let img = load_image(&image)?;
            let params = recommend_separation(class);
            let pixels = img.pixels().iter().map(|p| separate_to_cmyk(*p, &params)).collect();
            let sep = Separation {
                width: img.width(),
                height: img.height(),
                class,
                params,
                pixels,
            };
            write_json(&output, &sep)?;
        }
    }
    Ok(())
}
