//! Seeded thick-line scratch masks.
//!
//! Every line draws its randomness from its own ChaCha8 stream: the generator
//! is `ChaCha8Rng::seed_from_u64(seed)` with `set_stream(line_index)`. Values
//! are taken from `next_u64` in this order, one draw each:
//!
//! 1. anchor column, 2. anchor row, 3. angle, 4. length, 5. thickness.
//!
//! A draw `u` becomes a unit real `f = (u >> 11) * 2^-53`; an inclusive integer
//! range `[lo, hi]` maps to `lo + floor(f * (hi - lo + 1))`; the angle is
//! `f * pi`. The segment is centred on the anchor with end points
//! `anchor -/+ (length - 1) / 2 * (cos, sin)` rounded half away from zero,
//! rasterized with Bresenham stepping, then dilated by a `t`x`t` square
//! covering offsets `-(t-1)/2 ..= t/2` (integer division). Pixels outside the
//! image are dropped. Since each line has its own stream, raising
//! `line_count` only adds lines.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::ScratchMask;

pub const MIN_MASK_SIDE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineMaskSpec {
    pub line_count: u32,
    /// Inclusive thickness range in pixels.
    pub thickness_range: (u32, u32),
    /// Inclusive length range in pixels; `None` means `20..=min(w, h) / 2`.
    pub length_range: Option<(u32, u32)>,
    pub seed: u64,
}

impl Default for LineMaskSpec {
    fn default() -> Self {
        Self {
            line_count: 10,
            thickness_range: (1, 3),
            length_range: None,
            seed: 0,
        }
    }
}

impl LineMaskSpec {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    /// Length range used for a `width`x`height` image.
    pub fn resolved_length_range(&self, width: usize, height: usize) -> (u32, u32) {
        self.length_range.unwrap_or_else(|| {
            let hi = ((width.min(height) / 2) as u32).max(2);
            (20.min(hi), hi)
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.line_count < 1 {
            return bad("line_count must be at least 1".into());
        }
        let (t0, t1) = self.thickness_range;
        if t0 < 1 || t0 > t1 {
            return bad(format!("invalid thickness range {t0}..{t1}"));
        }
        if let Some((l0, l1)) = self.length_range {
            if l0 < 2 || l0 > l1 {
                return bad(format!("invalid length range {l0}..{l1}"));
            }
        }
        Ok(())
    }
}

struct LineDraws {
    rng: ChaCha8Rng,
}

impl LineDraws {
    fn new(seed: u64, line: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(line as u64);
        Self { rng }
    }

    fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn int(&mut self, lo: u64, hi: u64) -> u64 {
        let span = (hi - lo + 1) as f64;
        lo + ((self.unit() * span) as u64).min(hi - lo)
    }
}

/// One line's drawn parameters; exposed for diagnostics and tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineParams {
    pub anchor: (f64, f64),
    pub angle: f64,
    pub length: u32,
    pub thickness: u32,
}

pub fn line_params(width: usize, height: usize, spec: &LineMaskSpec, line: u32) -> LineParams {
    let (l0, l1) = spec.resolved_length_range(width, height);
    let (t0, t1) = spec.thickness_range;
    let mut d = LineDraws::new(spec.seed, line);
    let x = d.int(0, width as u64 - 1) as f64;
    let y = d.int(0, height as u64 - 1) as f64;
    let angle = d.unit() * std::f64::consts::PI;
    let length = d.int(l0 as u64, l1 as u64) as u32;
    let thickness = d.int(t0 as u64, t1 as u64) as u32;
    LineParams {
        anchor: (x, y),
        angle,
        length,
        thickness,
    }
}

/// Integer points from `(x0, y0)` to `(x1, y1)` inclusive.
pub fn bresenham(x0: i64, y0: i64, x1: i64, y1: i64) -> Vec<(i64, i64)> {
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let (mut x, mut y, mut err) = (x0, y0, dx + dy);
    let mut out = Vec::with_capacity((dx.max(-dy) + 1) as usize);
    loop {
        out.push((x, y));
        if x == x1 && y == y1 {
            return out;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

pub fn generate_mask(width: usize, height: usize, spec: &LineMaskSpec) -> Result<ScratchMask> {
    if width < MIN_MASK_SIDE || height < MIN_MASK_SIDE {
        return Err(Error::InvalidParameter(format!(
            "mask dimensions must be at least {MIN_MASK_SIDE}x{MIN_MASK_SIDE}, got {width}x{height}"
        )));
    }
    spec.validate()?;
    let mut mask = ScratchMask::empty(width, height)?;
    for line in 0..spec.line_count {
        let p = line_params(width, height, spec, line);
        let half = (p.length as f64 - 1.0) / 2.0;
        let (dx, dy) = (p.angle.cos() * half, p.angle.sin() * half);
        let (ax, ay) = p.anchor;
        let raster = bresenham(
            (ax - dx).round() as i64,
            (ay - dy).round() as i64,
            (ax + dx).round() as i64,
            (ay + dy).round() as i64,
        );
        let t = p.thickness as i64;
        let (lo, hi) = (-(t - 1) / 2, t / 2);
        for (x, y) in raster {
            for oy in lo..=hi {
                for ox in lo..=hi {
                    let (cx, cy) = (x + ox, y + oy);
                    if cx >= 0 && cy >= 0 && (cx as usize) < width && (cy as usize) < height {
                        mask.set(cy as usize, cx as usize, true);
                    }
                }
            }
        }
    }
    Ok(mask)
}
