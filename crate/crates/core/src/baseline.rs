//! Naive fills used as reference points in benchmarks.

use std::collections::VecDeque;

use crate::error::Result;
use crate::image::{ImageGrid, ScratchMask};
use crate::scalar::Scalar;

/// Copies each lost pixel from the closest known pixel (4-connected BFS;
/// ties resolve in raster order of the sources).
pub fn nearest_fill<T: Scalar>(image: &ImageGrid<T>, mask: &ScratchMask) -> Result<ImageGrid<T>> {
    image.check_mask(mask)?;
    let (w, h) = (image.width(), image.height());
    let mut source: Vec<Option<usize>> = vec![None; w * h];
    let mut queue = VecDeque::new();
    for (i, &m) in mask.as_slice().iter().enumerate() {
        if !m {
            source[i] = Some(i);
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (r, c) = (i / w, i % w);
        let mut visit = |j: usize| {
            if source[j].is_none() {
                source[j] = source[i];
                queue.push_back(j);
            }
        };
        if r > 0 {
            visit(i - w);
        }
        if c > 0 {
            visit(i - 1);
        }
        if c + 1 < w {
            visit(i + 1);
        }
        if r + 1 < h {
            visit(i + w);
        }
    }
    let mut out = image.clone();
    for (i, src) in source.iter().enumerate() {
        if let (true, Some(s)) = (mask.as_slice()[i], src) {
            for ch in 0..image.channels() {
                out.set(i / w, i % w, ch, image.get(s / w, s % w, ch));
            }
        }
    }
    Ok(out)
}

/// Linear interpolation between the nearest known pixels along the row and
/// along the column, averaged when both exist; otherwise nearest fill.
pub fn linear_fill<T: Scalar>(image: &ImageGrid<T>, mask: &ScratchMask) -> Result<ImageGrid<T>> {
    let nearest = nearest_fill(image, mask)?;
    let (w, h) = (image.width(), image.height());
    let mut out = nearest.clone();
    for (r, c) in mask.missing_coords() {
        let left = (0..c).rev().find(|&x| !mask.is_missing(r, x));
        let right = (c + 1..w).find(|&x| !mask.is_missing(r, x));
        let up = (0..r).rev().find(|&y| !mask.is_missing(y, c));
        let down = (r + 1..h).find(|&y| !mask.is_missing(y, c));
        for ch in 0..image.channels() {
            let mut sum = T::zero();
            let mut n = 0.0;
            if let (Some(a), Some(b)) = (left, right) {
                let t = T::of((c - a) as f64 / (b - a) as f64);
                sum += image.get(r, a, ch) * (T::one() - t) + image.get(r, b, ch) * t;
                n += 1.0;
            }
            if let (Some(a), Some(b)) = (up, down) {
                let t = T::of((r - a) as f64 / (b - a) as f64);
                sum += image.get(a, c, ch) * (T::one() - t) + image.get(b, c, ch) * t;
                n += 1.0;
            }
            if n > 0.0 {
                out.set(r, c, ch, sum / T::of(n));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_copies_closest() {
        let img = ImageGrid::<f64>::new(5, 1, 1, vec![0.1, 0.0, 0.0, 0.0, 0.9]).unwrap();
        let mask = ScratchMask::from_fn(5, 1, |_, c| (1..4).contains(&c)).unwrap();
        let out = nearest_fill(&img, &mask).unwrap();
        assert_eq!(out.samples(), &[0.1, 0.1, 0.1, 0.9, 0.9]);
    }

    #[test]
    fn linear_interpolates_row() {
        let img = ImageGrid::<f64>::new(5, 1, 1, vec![0.0, 0.0, 0.0, 0.0, 0.8]).unwrap();
        let mask = ScratchMask::from_fn(5, 1, |_, c| (1..4).contains(&c)).unwrap();
        let out = linear_fill(&img, &mask).unwrap();
        for (c, want) in [0.0, 0.2, 0.4, 0.6, 0.8].iter().enumerate() {
            assert!((out.get(0, c, 0) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn unmasked_pixels_untouched() {
        let img =
            ImageGrid::<f64>::from_fn(6, 6, 3, |r, c, ch| ((r + 2 * c + ch) % 7) as f64 / 6.0)
                .unwrap();
        let mask = ScratchMask::from_fn(6, 6, |r, c| r == c).unwrap();
        for out in [
            nearest_fill(&img, &mask).unwrap(),
            linear_fill(&img, &mask).unwrap(),
        ] {
            for r in 0..6 {
                for c in 0..6 {
                    if r != c {
                        assert_eq!(out.pixel(r, c), img.pixel(r, c));
                    }
                }
            }
        }
    }
}
