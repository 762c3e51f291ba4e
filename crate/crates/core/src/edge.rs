//! Horizontal/vertical edge sensing from auxiliary vectors.
//!
//! Each axis scores the absolute difference between the means of its two
//! flanking vectors. The larger score wins if it reaches the threshold; a tie
//! or an empty flank on an axis rules that axis out.

use crate::locality::AuxiliaryVectors;
use crate::scalar::Scalar;

pub const DEFAULT_EDGE_THRESHOLD: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeOrientation {
    /// Intensity changes across rows; the edge runs along the row.
    Horizontal,
    /// Intensity changes across columns; the edge runs along the column.
    Vertical,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeClass<T> {
    pub orientation: EdgeOrientation,
    pub score_h: T,
    pub score_v: T,
}

fn mean<T: Scalar>(xs: &[T]) -> T {
    xs.iter().copied().sum::<T>() / T::of(xs.len() as f64)
}

fn side_contrast<T: Scalar>(aux: &AuxiliaryVectors<T>) -> T {
    if aux.side_a.is_empty() || aux.side_b.is_empty() {
        T::zero()
    } else {
        (mean(&aux.side_a) - mean(&aux.side_b)).abs()
    }
}

/// `aux_h` holds the rows above/below, `aux_v` the columns left/right.
pub fn classify<T: Scalar>(
    aux_h: &AuxiliaryVectors<T>,
    aux_v: &AuxiliaryVectors<T>,
    threshold: T,
) -> EdgeClass<T> {
    let score_h = side_contrast(aux_h);
    let score_v = side_contrast(aux_v);
    let orientation = if score_h.max(score_v) < threshold || score_h == score_v {
        EdgeOrientation::None
    } else if score_h > score_v {
        EdgeOrientation::Horizontal
    } else {
        EdgeOrientation::Vertical
    };
    EdgeClass {
        orientation,
        score_h,
        score_v,
    }
}
