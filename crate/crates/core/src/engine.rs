//! End-to-end inpainting.
//!
//! Lost pixels are filled in passes. Each pass reads a frozen snapshot (the
//! original known pixels plus everything filled by earlier passes), so the
//! visiting order inside a pass never matters and the work runs on the
//! ambient rayon pool. A pixel that no direction can reach waits for a later
//! pass. Whatever is left after `max_passes`, or after a pass that fills
//! nothing, is filled with the mean of its known 8-neighbors and finally with
//! the global mean of known pixels.

use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::edge::{classify, EdgeOrientation, DEFAULT_EDGE_THRESHOLD};
use crate::error::{Error, Result};
use crate::fusion::{fuse, DirectionalPredictions};
use crate::image::{Coord, Direction, ImageGrid, ScratchMask};
use crate::io::{load_image, load_mask, save_image};
use crate::locality::{auxiliary_for_offsets, select_stencil, Axis, DEFAULT_K_TOTAL};
use crate::scalar::Scalar;
use crate::spline::predict_stencil;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InpaintConfig {
    /// Samples per direction; even and at least 2.
    pub k_total: usize,
    /// Edge score threshold on the `[0, 1]` intensity scale.
    pub edge_threshold: f64,
    pub max_passes: usize,
}

impl Default for InpaintConfig {
    fn default() -> Self {
        Self {
            k_total: DEFAULT_K_TOTAL,
            edge_threshold: DEFAULT_EDGE_THRESHOLD,
            max_passes: 8,
        }
    }
}

impl InpaintConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_total < 2 || !self.k_total.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "k_total must be even and at least 2, got {}",
                self.k_total
            )));
        }
        if !(self.edge_threshold > 0.0 && self.edge_threshold < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "edge_threshold must lie in (0, 1), got {}",
                self.edge_threshold
            )));
        }
        if self.max_passes < 1 {
            return Err(Error::InvalidParameter(
                "max_passes must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// How the lost pixels were resolved.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InpaintStats {
    /// Pixels filled by each spline pass.
    pub filled_per_pass: Vec<usize>,
    pub neighbor_fallback: usize,
    pub global_fallback: usize,
    /// Lost pixels left untouched because the image has no known pixel at all.
    pub unresolved: usize,
}

/// Per-pixel decision for one pass; exposed for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelEstimate<T> {
    pub edge: EdgeOrientation,
    pub predictions: Vec<DirectionalPredictions<T>>,
    pub values: Option<Vec<T>>,
}

/// Predicts every channel of the lost pixel `p` from the snapshot `(image, mask)`.
pub fn estimate_pixel<T: Scalar>(
    image: &ImageGrid<T>,
    luma: &ImageGrid<T>,
    mask: &ScratchMask,
    p: Coord,
    cfg: &InpaintConfig,
) -> PixelEstimate<T> {
    let (w, h) = (image.width(), image.height());
    let stencils = Direction::ALL.map(|d| select_stencil(mask, p, d, cfg.k_total));
    let aux_h = auxiliary_for_offsets(luma, mask, p, Axis::Horizontal, &stencils[0].offsets);
    let aux_v = auxiliary_for_offsets(luma, mask, p, Axis::Vertical, &stencils[1].offsets);
    let edge = classify(&aux_h, &aux_v, T::of(cfg.edge_threshold)).orientation;

    let predictions: Vec<DirectionalPredictions<T>> = (0..image.channels())
        .map(|ch| {
            let mut preds = DirectionalPredictions::new();
            for s in &stencils {
                preds.set(s.direction, predict_stencil(image, p, s, ch));
            }
            preds
        })
        .collect();
    debug_assert!(stencils
        .iter()
        .all(|s| s.coords(p, w, h).all(|(r, c)| !mask.is_missing(r, c))));
    let values = predictions
        .iter()
        .map(|preds| fuse(preds, edge))
        .collect::<Option<Vec<T>>>();
    PixelEstimate {
        edge,
        predictions,
        values,
    }
}

pub fn inpaint<T: Scalar>(
    image: &ImageGrid<T>,
    mask: &ScratchMask,
    cfg: &InpaintConfig,
) -> Result<ImageGrid<T>> {
    inpaint_with_stats(image, mask, cfg).map(|(out, _)| out)
}

pub fn inpaint_with_stats<T: Scalar>(
    image: &ImageGrid<T>,
    mask: &ScratchMask,
    cfg: &InpaintConfig,
) -> Result<(ImageGrid<T>, InpaintStats)> {
    image.check_mask(mask)?;
    cfg.validate()?;
    let mut out = image.clone();
    let mut pending = mask.clone();
    let mut todo = mask.missing_coords();
    let mut stats = InpaintStats::default();

    for _ in 0..cfg.max_passes {
        if todo.is_empty() {
            break;
        }
        let luma = out.luminance();
        let results: Vec<Option<Vec<T>>> = todo
            .par_iter()
            .map(|&p| estimate_pixel(&out, &luma, &pending, p, cfg).values)
            .collect();

        let mut still = Vec::with_capacity(todo.len());
        let mut filled = 0;
        for (&(r, c), values) in todo.iter().zip(results) {
            match values {
                Some(vals) => {
                    for (ch, v) in vals.into_iter().enumerate() {
                        out.set(r, c, ch, v);
                    }
                    pending.set(r, c, false);
                    filled += 1;
                }
                None => still.push((r, c)),
            }
        }
        stats.filled_per_pass.push(filled);
        todo = still;
        if filled == 0 {
            break;
        }
    }

    if !todo.is_empty() {
        fill_leftovers(&mut out, &mut pending, todo, &mut stats);
    }
    Ok((out, stats))
}

fn fill_leftovers<T: Scalar>(
    out: &mut ImageGrid<T>,
    pending: &mut ScratchMask,
    todo: Vec<Coord>,
    stats: &mut InpaintStats,
) {
    let channels = out.channels();
    let neighbor_means: Vec<Option<Vec<T>>> = todo
        .iter()
        .map(|&(r, c)| {
            let mut sum = vec![T::zero(); channels];
            let mut n = 0usize;
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    let (nr, nc) = (r as isize + dr, c as isize + dc);
                    if (dr, dc) != (0, 0) && pending.is_known_at(nr, nc) {
                        for (ch, s) in sum.iter_mut().enumerate() {
                            *s += out.get(nr as usize, nc as usize, ch);
                        }
                        n += 1;
                    }
                }
            }
            (n > 0).then(|| sum.into_iter().map(|s| s / T::of(n as f64)).collect())
        })
        .collect();

    let mut isolated = Vec::new();
    for (&(r, c), means) in todo.iter().zip(&neighbor_means) {
        match means {
            Some(vals) => {
                for (ch, &v) in vals.iter().enumerate() {
                    out.set(r, c, ch, v);
                }
                stats.neighbor_fallback += 1;
            }
            None => isolated.push((r, c)),
        }
    }
    for &(r, c) in &todo {
        pending.set(r, c, false);
    }
    for &(r, c) in &isolated {
        pending.set(r, c, true);
    }
    if isolated.is_empty() {
        return;
    }

    let mut sum = vec![T::zero(); channels];
    let mut n = 0usize;
    for r in 0..out.height() {
        for c in 0..out.width() {
            if !pending.is_missing(r, c) {
                for (ch, s) in sum.iter_mut().enumerate() {
                    *s += out.get(r, c, ch);
                }
                n += 1;
            }
        }
    }
    if n == 0 {
        stats.unresolved = isolated.len();
        return;
    }
    let means: Vec<T> = sum.into_iter().map(|s| s / T::of(n as f64)).collect();
    for &(r, c) in &isolated {
        for (ch, &v) in means.iter().enumerate() {
            out.set(r, c, ch, v);
        }
        pending.set(r, c, false);
        stats.global_fallback += 1;
    }
}

/// Wall-clock time of the inpaint call alone, excluding file I/O.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InpaintTiming {
    pub elapsed: Duration,
}

impl InpaintTiming {
    pub fn seconds(&self) -> f64 {
        self.elapsed.as_secs_f64()
    }
}

/// Loads an image/mask pair, inpaints, and writes the result.
pub fn inpaint_file(
    image_path: impl AsRef<Path>,
    mask_path: impl AsRef<Path>,
    out_path: impl AsRef<Path>,
    cfg: &InpaintConfig,
) -> Result<InpaintTiming> {
    let image: ImageGrid<f64> = load_image(image_path)?;
    let mask = load_mask(mask_path)?;
    image.check_mask(&mask)?;
    let start = Instant::now();
    let out = inpaint(&image, &mask, cfg)?;
    let elapsed = start.elapsed();
    save_image(&out, out_path)?;
    Ok(InpaintTiming { elapsed })
}
