//! Image and mask grids.
//!
//! Samples are stored row-major as real intensities in `[0, 1]`; pixel
//! coordinates are `(row, col)` pairs. Every write goes through
//! [`Scalar::clamp_unit`], so a grid can never hold an out-of-range sample.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `(row, col)` pixel coordinate.
pub type Coord = (usize, usize);

/// Rec. 601 luma weights for `r`, `g`, `b`.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid<T> {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<T>,
}

impl<T: Scalar> ImageGrid<T> {
    /// Builds a grid from row-major interleaved samples, clamping each into `[0, 1]`.
    pub fn new(width: usize, height: usize, channels: usize, samples: Vec<T>) -> Result<Self> {
        check_dims(width, height)?;
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidParameter(format!(
                "channels must be 1 or 3, got {channels}"
            )));
        }
        if samples.len() != width * height * channels {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples for {width}x{height}x{channels}, got {}",
                width * height * channels,
                samples.len()
            )));
        }
        let samples = samples.into_iter().map(Scalar::clamp_unit).collect();
        Ok(Self {
            width,
            height,
            channels,
            samples,
        })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: T) -> Result<Self> {
        Self::new(
            width,
            height,
            channels,
            vec![value; width * height * channels],
        )
    }

    /// Builds a grid by evaluating `f(row, col, channel)` at every sample.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> T,
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height * channels);
        for r in 0..height {
            for c in 0..width {
                for ch in 0..channels {
                    samples.push(f(r, c, ch));
                }
            }
        }
        Self::new(width, height, channels, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, channel: usize) -> T {
        self.samples[(row * self.width + col) * self.channels + channel]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, channel: usize, value: T) {
        self.samples[(row * self.width + col) * self.channels + channel] = value.clamp_unit();
    }

    /// All channel samples of one pixel.
    #[inline]
    pub fn pixel(&self, row: usize, col: usize) -> &[T] {
        let start = (row * self.width + col) * self.channels;
        &self.samples[start..start + self.channels]
    }

    /// Single-channel luma view; a gray image is copied unchanged.
    pub fn luminance(&self) -> ImageGrid<T> {
        if self.channels == 1 {
            return self.clone();
        }
        let [wr, wg, wb] = LUMA_WEIGHTS.map(T::of);
        let samples = self
            .samples
            .chunks_exact(3)
            .map(|px| (wr * px[0] + wg * px[1] + wb * px[2]).clamp_unit())
            .collect();
        ImageGrid {
            width: self.width,
            height: self.height,
            channels: 1,
            samples,
        }
    }

    /// Converts the sample type, e.g. `f64` to `f32`.
    pub fn cast<U: Scalar>(&self) -> ImageGrid<U> {
        ImageGrid {
            width: self.width,
            height: self.height,
            channels: self.channels,
            samples: self
                .samples
                .iter()
                .map(|&s| U::of(s.to_f64_lossy()).clamp_unit())
                .collect(),
        }
    }

    /// Samples quantized to bytes with round-half-away-from-zero.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.samples.iter().map(|&s| quantize(s)).collect()
    }

    pub fn from_bytes(width: usize, height: usize, channels: usize, bytes: &[u8]) -> Result<Self> {
        let scale = T::of(255.0);
        Self::new(
            width,
            height,
            channels,
            bytes.iter().map(|&b| T::of(b as f64) / scale).collect(),
        )
    }

    /// Errors unless `mask` has the same width and height.
    pub fn check_mask(&self, mask: &ScratchMask) -> Result<()> {
        check_same_dims((self.width, self.height), (mask.width(), mask.height()))
    }
}

/// `round(sample * 255)` with ties away from zero, after clamping.
#[inline]
pub fn quantize<T: Scalar>(sample: T) -> u8 {
    (sample.clamp_unit().to_f64_lossy() * 255.0).round() as u8
}

pub(crate) fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter(format!(
            "image dimensions must be positive, got {width}x{height}"
        )));
    }
    Ok(())
}

pub(crate) fn check_same_dims(left: (usize, usize), right: (usize, usize)) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch {
            left_w: left.0,
            left_h: left.1,
            right_w: right.0,
            right_h: right.1,
        });
    }
    Ok(())
}

/// Binary map of lost pixels (`true` = missing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScratchMask {
    width: usize,
    height: usize,
    missing: Vec<bool>,
}

impl ScratchMask {
    pub fn new(width: usize, height: usize, missing: Vec<bool>) -> Result<Self> {
        check_dims(width, height)?;
        if missing.len() != width * height {
            return Err(Error::InvalidParameter(format!(
                "expected {} mask entries for {width}x{height}, got {}",
                width * height,
                missing.len()
            )));
        }
        Ok(Self {
            width,
            height,
            missing,
        })
    }

    /// A mask with no lost pixels.
    pub fn empty(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut missing = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                missing.push(f(r, c));
            }
        }
        Self::new(width, height, missing)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.missing
    }

    #[inline]
    pub fn is_missing(&self, row: usize, col: usize) -> bool {
        self.missing[row * self.width + col]
    }

    /// `None` when `(row, col)` is outside the grid.
    #[inline]
    pub fn state_at(&self, row: isize, col: isize) -> Option<bool> {
        if row < 0 || col < 0 || row as usize >= self.height || col as usize >= self.width {
            None
        } else {
            Some(self.missing[row as usize * self.width + col as usize])
        }
    }

    /// True when `(row, col)` is inside the grid and known.
    #[inline]
    pub fn is_known_at(&self, row: isize, col: isize) -> bool {
        self.state_at(row, col) == Some(false)
    }

    pub fn set(&mut self, row: usize, col: usize, missing: bool) {
        self.missing[row * self.width + col] = missing;
    }

    pub fn missing_count(&self) -> usize {
        self.missing.iter().filter(|&&m| m).count()
    }

    /// Coordinates of every lost pixel in raster order.
    pub fn missing_coords(&self) -> Vec<Coord> {
        self.missing
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| (i / self.width, i % self.width))
            .collect()
    }

    /// 255 for missing, 0 for known.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.missing
            .iter()
            .map(|&m| if m { 255 } else { 0 })
            .collect()
    }
}

/// Interpolation direction with its unit `(d_row, d_col)` step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Horizontal,
    Vertical,
    Diag45,
    Diag135,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Horizontal,
        Direction::Vertical,
        Direction::Diag45,
        Direction::Diag135,
    ];

    pub fn step(self) -> (isize, isize) {
        match self {
            Direction::Horizontal => (0, 1),
            Direction::Vertical => (1, 0),
            Direction::Diag45 => (-1, 1),
            Direction::Diag135 => (1, 1),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Direction::Horizontal => 0,
            Direction::Vertical => 1,
            Direction::Diag45 => 2,
            Direction::Diag135 => 3,
        }
    }

    /// Pixel reached from `p` after `offset` steps, if inside a `width`x`height` grid.
    #[inline]
    pub fn walk(self, p: Coord, offset: isize, width: usize, height: usize) -> Option<Coord> {
        let (dr, dc) = self.step();
        let r = p.0 as isize + dr * offset;
        let c = p.1 as isize + dc * offset;
        (r >= 0 && c >= 0 && (r as usize) < height && (c as usize) < width)
            .then_some((r as usize, c as usize))
    }
}
