//! Fusion of the four directional predictions.
//!
//! A detected edge selects the prediction running along it. Otherwise, with
//! all four predictions present, they are sorted and the adjacent gaps
//! compared: a strictly largest first gap drops the smallest value, a
//! strictly largest last gap drops the largest one. The survivors are
//! averaged. With fewer than four predictions every present value is averaged.

use crate::edge::EdgeOrientation;
use crate::image::Direction;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DirectionalPredictions<T> {
    values: [Option<T>; 4],
}

impl<T: Scalar> DirectionalPredictions<T> {
    pub fn new() -> Self {
        Self { values: [None; 4] }
    }

    pub fn from_array(values: [Option<T>; 4]) -> Self {
        Self { values }
    }

    pub fn get(&self, dir: Direction) -> Option<T> {
        self.values[dir.index()]
    }

    pub fn set(&mut self, dir: Direction, value: Option<T>) {
        self.values[dir.index()] = value;
    }

    pub fn present(&self) -> impl Iterator<Item = T> + '_ {
        self.values.iter().flatten().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(Option::is_none)
    }
}

/// Mean anchored at the first value, exact when all values agree.
fn mean<T: Scalar>(xs: &[T]) -> T {
    let first = xs[0];
    first + xs.iter().map(|&x| x - first).sum::<T>() / T::of(xs.len() as f64)
}

pub fn fuse<T: Scalar>(preds: &DirectionalPredictions<T>, edge: EdgeOrientation) -> Option<T> {
    let trusted = match edge {
        EdgeOrientation::Vertical => preds.get(Direction::Vertical),
        EdgeOrientation::Horizontal => preds.get(Direction::Horizontal),
        EdgeOrientation::None => None,
    };
    if trusted.is_some() {
        return trusted;
    }

    let mut v: Vec<T> = preds.present().collect();
    if v.is_empty() {
        return None;
    }
    if v.len() < 4 {
        return Some(mean(&v));
    }
    v.sort_by(|a, b| a.partial_cmp(b).expect("predictions are finite"));
    let (d1, d2, d3) = (v[1] - v[0], v[2] - v[1], v[3] - v[2]);
    let kept = if d1 > d2 && d1 > d3 {
        &v[1..]
    } else if d3 > d1 && d3 > d2 {
        &v[..3]
    } else {
        &v[..]
    };
    Some(mean(kept))
}
