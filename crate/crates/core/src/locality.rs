//! Adaptive neighbor selection along one direction, and the flanking
//! auxiliary vectors used for edge sensing.
//!
//! Around a lost pixel `p` the masked run extends `gap_before` steps on the
//! negative side and `gap_after` on the positive side. More known samples are
//! taken from the side whose gap is shorter; with equal gaps the quota is
//! split evenly. Samples are consecutive known pixels directly beyond the run.
//! A side that cannot meet its quota hands the shortfall to the other side.

use crate::image::{Coord, Direction, ImageGrid, ScratchMask};
use crate::scalar::Scalar;

pub const DEFAULT_K_TOTAL: usize = 4;

/// Where the samples for one direction sit, independent of pixel values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stencil {
    pub direction: Direction,
    /// Strictly increasing step offsets, never 0.
    pub offsets: Vec<isize>,
    pub gap_before: usize,
    pub gap_after: usize,
}

impl Stencil {
    /// Pixel coordinates of the samples, in offset order.
    pub fn coords<'a>(
        &'a self,
        p: Coord,
        width: usize,
        height: usize,
    ) -> impl Iterator<Item = Coord> + 'a {
        self.offsets.iter().map(move |&o| {
            self.direction
                .walk(p, o, width, height)
                .expect("stencil offsets are in bounds")
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeighborSelection<T> {
    pub direction: Direction,
    /// `(offset, value)` pairs with strictly increasing offsets.
    pub samples: Vec<(isize, T)>,
    pub gap_before: usize,
    pub gap_after: usize,
}

/// Steps from `p` while the pixel is in bounds and missing.
fn gap_len(mask: &ScratchMask, p: Coord, dir: Direction, sign: isize) -> usize {
    let (dr, dc) = dir.step();
    let mut n = 0;
    loop {
        let k = sign * (n as isize + 1);
        match mask.state_at(p.0 as isize + dr * k, p.1 as isize + dc * k) {
            Some(true) => n += 1,
            _ => return n,
        }
    }
}

/// Consecutive known pixels starting right past the gap, capped at `cap`.
fn known_run(
    mask: &ScratchMask,
    p: Coord,
    dir: Direction,
    sign: isize,
    gap: usize,
    cap: usize,
) -> usize {
    let (dr, dc) = dir.step();
    let mut n = 0;
    while n < cap {
        let k = sign * (gap + 1 + n) as isize;
        if !mask.is_known_at(p.0 as isize + dr * k, p.1 as isize + dc * k) {
            break;
        }
        n += 1;
    }
    n
}

/// Before/after quota for the given gaps.
pub fn quota(gap_before: usize, gap_after: usize, k_total: usize) -> (usize, usize) {
    use std::cmp::Ordering::*;
    match gap_after.cmp(&gap_before) {
        Greater => (k_total - 1, 1),
        Less => (1, k_total - 1),
        Equal => (k_total / 2, k_total / 2),
    }
}

/// Sample positions for the lost pixel `p` along `dir`.
///
/// `k_total` must be even and at least 2. An empty stencil means the
/// direction cannot be used for `p`.
pub fn select_stencil(mask: &ScratchMask, p: Coord, dir: Direction, k_total: usize) -> Stencil {
    debug_assert!(k_total >= 2 && k_total.is_multiple_of(2));
    let gap_before = gap_len(mask, p, dir, -1);
    let gap_after = gap_len(mask, p, dir, 1);
    let (want_before, want_after) = quota(gap_before, gap_after, k_total);
    let avail_before = known_run(mask, p, dir, -1, gap_before, k_total);
    let avail_after = known_run(mask, p, dir, 1, gap_after, k_total);

    let short_before = want_before.saturating_sub(avail_before);
    let short_after = want_after.saturating_sub(avail_after);
    let take_before = avail_before.min(want_before + short_after);
    let take_after = avail_after.min(want_after + short_before);

    let mut offsets = Vec::with_capacity(take_before + take_after);
    offsets.extend(
        (0..take_before)
            .rev()
            .map(|i| -((gap_before + 1 + i) as isize)),
    );
    offsets.extend((0..take_after).map(|i| (gap_after + 1 + i) as isize));
    Stencil {
        direction: dir,
        offsets,
        gap_before,
        gap_after,
    }
}

/// Adaptive neighbors of `p` along `dir`, read from channel 0 of `image`.
pub fn select_neighbors<T: Scalar>(
    image: &ImageGrid<T>,
    mask: &ScratchMask,
    p: Coord,
    dir: Direction,
    k_total: usize,
) -> NeighborSelection<T> {
    let stencil = select_stencil(mask, p, dir, k_total);
    let samples = stencil
        .offsets
        .iter()
        .zip(stencil.coords(p, image.width(), image.height()))
        .map(|(&o, (r, c))| (o, image.get(r, c, 0)))
        .collect();
    NeighborSelection {
        direction: dir,
        samples,
        gap_before: stencil.gap_before,
        gap_after: stencil.gap_after,
    }
}

/// Axis along which an edge may be sensed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Horizontal,
    Vertical,
}

impl Axis {
    pub fn direction(self) -> Direction {
        match self {
            Axis::Horizontal => Direction::Horizontal,
            Axis::Vertical => Direction::Vertical,
        }
    }

    /// Perpendicular unit offset to side `a` (above / left); side `b` is its negation.
    fn side_offset(self) -> (isize, isize) {
        match self {
            Axis::Horizontal => (-1, 0),
            Axis::Vertical => (0, -1),
        }
    }
}

/// Samples flanking a neighbor vector: above/below for the horizontal axis,
/// left/right for the vertical one. Masked or out-of-bounds entries are omitted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AuxiliaryVectors<T> {
    pub side_a: Vec<T>,
    pub side_b: Vec<T>,
}

/// Auxiliary vectors for `p` on `axis`, covering every stencil position and `p` itself.
pub fn auxiliary_for_offsets<T: Scalar>(
    luma: &ImageGrid<T>,
    mask: &ScratchMask,
    p: Coord,
    axis: Axis,
    offsets: &[isize],
) -> AuxiliaryVectors<T> {
    let (dr, dc) = axis.direction().step();
    let (sr, sc) = axis.side_offset();
    let mut aux = AuxiliaryVectors {
        side_a: Vec::with_capacity(offsets.len() + 1),
        side_b: Vec::with_capacity(offsets.len() + 1),
    };
    let split = offsets.partition_point(|&o| o < 0);
    let along = offsets[..split]
        .iter()
        .copied()
        .chain(std::iter::once(0))
        .chain(offsets[split..].iter().copied());
    for o in along {
        let r = p.0 as isize + dr * o;
        let c = p.1 as isize + dc * o;
        for (sign, side) in [(1, &mut aux.side_a), (-1, &mut aux.side_b)] {
            let (ar, ac) = (r + sign * sr, c + sign * sc);
            if mask.is_known_at(ar, ac) {
                side.push(luma.get(ar as usize, ac as usize, 0));
            }
        }
    }
    aux
}

pub fn extract_auxiliary<T: Scalar>(
    image: &ImageGrid<T>,
    mask: &ScratchMask,
    p: Coord,
    axis: Axis,
    selection: &NeighborSelection<T>,
) -> AuxiliaryVectors<T> {
    debug_assert_eq!(selection.direction, axis.direction());
    let offsets: Vec<isize> = selection.samples.iter().map(|&(o, _)| o).collect();
    auxiliary_for_offsets(image, mask, p, axis, &offsets)
}
