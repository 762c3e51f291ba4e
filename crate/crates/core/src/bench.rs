//! Dataset benchmark: mask, corrupt, restore, score, time.
//!
//! Every PNG in the dataset directory (sorted by file name) is paired with
//! a generated scratch mask for each requested seed. The mask seed is the
//! requested seed itself, so two images of equal size share a mask. Each
//! method is timed on a dedicated single-thread rayon pool; `jobs` only
//! controls how many images are processed concurrently.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::baseline::{linear_fill, nearest_fill};
use crate::engine::{inpaint, InpaintConfig};
use crate::error::{Error, Result};
use crate::image::{ImageGrid, ScratchMask};
use crate::io::load_image;
use crate::maskgen::{generate_mask, LineMaskSpec};
use crate::metrics::{psnr, psnr_masked, ssim};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    AdaptiveSpline,
    NearestFill,
    LinearFill,
}

impl Method {
    pub const ALL: [Method; 3] = [
        Method::AdaptiveSpline,
        Method::NearestFill,
        Method::LinearFill,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::AdaptiveSpline => "adaptive-spline",
            Method::NearestFill => "nearest-fill",
            Method::LinearFill => "linear-fill",
        }
    }

    pub fn run(
        self,
        image: &ImageGrid<f64>,
        mask: &ScratchMask,
        cfg: &InpaintConfig,
    ) -> Result<ImageGrid<f64>> {
        match self {
            Method::AdaptiveSpline => inpaint(image, mask, cfg),
            Method::NearestFill => nearest_fill(image, mask),
            Method::LinearFill => linear_fill(image, mask),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub image_id: String,
    pub method: Method,
    pub psnr_db: f64,
    pub psnr_masked_db: f64,
    pub ssim: f64,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    pub count: usize,
    pub mean_psnr_db: f64,
    pub mean_psnr_masked_db: f64,
    pub mean_ssim: f64,
    pub mean_elapsed_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    /// Mask shape; its `seed` is replaced by each entry of `seeds`.
    pub mask_spec: LineMaskSpec,
    pub seeds: Vec<u64>,
    pub config: InpaintConfig,
    pub jobs: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            mask_spec: LineMaskSpec::default(),
            seeds: vec![0],
            config: InpaintConfig::default(),
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub rows: Vec<MetricsReport>,
    pub summary: Vec<MethodSummary>,
    /// Images where a naive baseline beat the adaptive method on PSNR.
    pub violations: Vec<String>,
}

pub fn dataset_images(dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| e.eq_ignore_ascii_case("png"))
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::EmptyDataset(dir.to_path_buf()));
    }
    Ok(paths)
}

/// Scores every method on one image/mask pair.
pub fn bench_image(
    image_id: &str,
    original: &ImageGrid<f64>,
    mask: &ScratchMask,
    cfg: &InpaintConfig,
) -> Result<Vec<MetricsReport>> {
    original.check_mask(mask)?;
    // Lost pixels are blanked so no method can read the ground truth.
    let mut damaged = original.clone();
    for (r, c) in mask.missing_coords() {
        for ch in 0..damaged.channels() {
            damaged.set(r, c, ch, 0.0);
        }
    }
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Method::ALL
        .iter()
        .map(|&method| {
            let (restored, elapsed) = single.install(|| {
                let start = Instant::now();
                let out = method.run(&damaged, mask, cfg);
                (out, start.elapsed().as_secs_f64())
            });
            let restored = restored?;
            Ok(MetricsReport {
                image_id: image_id.to_string(),
                method,
                psnr_db: psnr(original, &restored)?,
                psnr_masked_db: psnr_masked(original, &restored, mask)?,
                ssim: ssim(original, &restored)?,
                elapsed_seconds: elapsed,
            })
        })
        .collect()
}

pub fn bench(dataset_dir: impl AsRef<Path>, opts: &BenchOptions) -> Result<BenchReport> {
    opts.config.validate()?;
    opts.mask_spec.validate()?;
    if opts.seeds.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one seed is required".into(),
        ));
    }
    let paths = dataset_images(dataset_dir)?;
    let tasks: Vec<(PathBuf, u64)> = paths
        .iter()
        .flat_map(|p| opts.seeds.iter().map(move |&s| (p.clone(), s)))
        .collect();
    let multi_seed = opts.seeds.len() > 1;

    let run = |(path, seed): &(PathBuf, u64)| -> Result<Vec<MetricsReport>> {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let id = if multi_seed {
            format!("{stem}@{seed}")
        } else {
            stem
        };
        let original: ImageGrid<f64> = load_image(path)?;
        let spec = LineMaskSpec {
            seed: *seed,
            ..opts.mask_spec.clone()
        };
        let mask = generate_mask(original.width(), original.height(), &spec)?;
        bench_image(&id, &original, &mask, &opts.config)
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let per_task: Vec<Vec<MetricsReport>> =
        pool.install(|| tasks.par_iter().map(run).collect::<Result<_>>())?;

    let mut violations = Vec::new();
    for rows in &per_task {
        let ours = &rows[0];
        for other in &rows[1..] {
            if ours.psnr_db < other.psnr_db {
                violations.push(format!(
                    "{}: {} {:.3} dB < {} {:.3} dB",
                    ours.image_id,
                    ours.method.name(),
                    ours.psnr_db,
                    other.method.name(),
                    other.psnr_db
                ));
            }
        }
    }
    let rows: Vec<MetricsReport> = per_task.into_iter().flatten().collect();
    let summary = summarize(&rows);
    Ok(BenchReport {
        rows,
        summary,
        violations,
    })
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

pub fn summarize(rows: &[MetricsReport]) -> Vec<MethodSummary> {
    Method::ALL
        .iter()
        .filter_map(|&method| {
            let mine: Vec<&MetricsReport> = rows.iter().filter(|r| r.method == method).collect();
            (!mine.is_empty()).then(|| MethodSummary {
                method,
                count: mine.len(),
                mean_psnr_db: mean(mine.iter().map(|r| r.psnr_db)),
                mean_psnr_masked_db: mean(mine.iter().map(|r| r.psnr_masked_db)),
                mean_ssim: mean(mine.iter().map(|r| r.ssim)),
                mean_elapsed_seconds: mean(mine.iter().map(|r| r.elapsed_seconds)),
            })
        })
        .collect()
}

pub const CSV_HEADER: [&str; 6] = [
    "image_id",
    "psnr_db",
    "psnr_masked_db",
    "ssim",
    "elapsed_seconds",
    "method",
];

pub fn write_csv<W: Write>(rows: &[MetricsReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Report(e.to_string());
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in rows {
        w.write_record([
            r.image_id.clone(),
            r.psnr_db.to_string(),
            r.psnr_masked_db.to_string(),
            r.ssim.to_string(),
            r.elapsed_seconds.to_string(),
            r.method.name().to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::Report(e.to_string()))
}

/// Finite values as JSON numbers; infinities and NaN as strings ("inf", "-inf", "nan").
pub fn json_real(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::String(v.to_string().to_lowercase())
    }
}

pub fn summary_json(report: &BenchReport, opts: &BenchOptions) -> Value {
    let methods: Vec<Value> = report
        .summary
        .iter()
        .map(|s| {
            json!({
                "method": s.method.name(),
                "count": s.count,
                "mean_psnr_db": json_real(s.mean_psnr_db),
                "mean_psnr_masked_db": json_real(s.mean_psnr_masked_db),
                "mean_ssim": json_real(s.mean_ssim),
                "mean_elapsed_seconds": json_real(s.mean_elapsed_seconds),
            })
        })
        .collect();
    json!({
        "methods": methods,
        "seeds": opts.seeds,
        "mask": {
            "line_count": opts.mask_spec.line_count,
            "thickness_range": [opts.mask_spec.thickness_range.0, opts.mask_spec.thickness_range.1],
            "length_range": opts.mask_spec.length_range.map(|(a, b)| vec![a, b]),
        },
        "config": opts.config,
        "violations": report.violations,
    })
}
