//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the library code it checks.

#![allow(dead_code)]

use adaptive_inpaint::{EdgeOrientation, Image, ScratchMask};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Prints one acceptance line and fails the test when `ok` is false.
pub fn report(name: &str, ok: bool, detail: impl AsRef<str>) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE [{tag}] {name}: {}", detail.as_ref());
    assert!(ok, "{name} failed: {}", detail.as_ref());
}

// ---------------------------------------------------------------------------
// Natural cubic spline via a dense linear system.

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Natural-spline second derivatives from the full n x n system
/// (boundary rows `M_0 = 0`, `M_{n-1} = 0`).
pub fn oracle_second_derivatives(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut a = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    a[0][0] = 1.0;
    a[n - 1][n - 1] = 1.0;
    for i in 1..n - 1 {
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        a[i][i - 1] = h0 / 6.0;
        a[i][i] = (h0 + h1) / 3.0;
        a[i][i + 1] = h1 / 6.0;
        b[i] = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
    }
    dense_solve(a, b)
}

/// Evaluates the spline from its power-basis coefficients on the segment
/// containing `x` (end segments extended).
pub fn oracle_spline_eval(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let m = oracle_second_derivatives(xs, ys);
    let n = xs.len();
    let mut i = 0;
    while i + 2 < n && x >= xs[i + 1] {
        i += 1;
    }
    let h = xs[i + 1] - xs[i];
    let slope = (ys[i + 1] - ys[i]) / h - h * (2.0 * m[i] + m[i + 1]) / 6.0;
    let t = x - xs[i];
    ys[i] + slope * t + m[i] / 2.0 * t * t + (m[i + 1] - m[i]) / (6.0 * h) * t * t * t
}

// ---------------------------------------------------------------------------
// Neighbor selection on a single row of pixels.

/// Offsets chosen for position `p` of a row (`true` = missing), written
/// straight from the selection rules with an incremental deficit transfer.
pub fn oracle_row_offsets(row: &[bool], p: usize, k: usize) -> Vec<isize> {
    let n = row.len() as isize;
    let p = p as isize;
    let missing = |i: isize| i >= 0 && i < n && row[i as usize];
    let known = |i: isize| i >= 0 && i < n && !row[i as usize];

    let mut a = 0;
    while missing(p - a - 1) {
        a += 1;
    }
    let mut b = 0;
    while missing(p + b + 1) {
        b += 1;
    }
    let (q_before, q_after) = if b > a {
        (k - 1, 1)
    } else if a > b {
        (1, k - 1)
    } else {
        (k / 2, k / 2)
    };
    let mut left = Vec::new();
    let mut i = p - a - 1;
    while known(i) {
        left.push(i - p);
        i -= 1;
    }
    let mut right = Vec::new();
    let mut i = p + b + 1;
    while known(i) {
        right.push(i - p);
        i += 1;
    }
    let mut take_l = q_before.min(left.len());
    let mut take_r = q_after.min(right.len());
    let left_short = take_l < q_before;
    let right_short = take_r < q_after;
    while take_l + take_r < k {
        if left_short && !right_short && take_r < right.len() {
            take_r += 1;
        } else if right_short && !left_short && take_l < left.len() {
            take_l += 1;
        } else {
            break;
        }
    }
    let mut out: Vec<isize> = left[..take_l].to_vec();
    out.reverse();
    out.extend_from_slice(&right[..take_r]);
    out
}

// ---------------------------------------------------------------------------
// Fusion, transcribed from the textual rule.

/// `preds` in H, V, D45, D135 order.
pub fn oracle_fuse(preds: [Option<f64>; 4], edge: EdgeOrientation) -> Option<f64> {
    if edge == EdgeOrientation::Vertical {
        if let Some(v) = preds[1] {
            return Some(v);
        }
    }
    if edge == EdgeOrientation::Horizontal {
        if let Some(h) = preds[0] {
            return Some(h);
        }
    }
    let mut v: Vec<f64> = preds.iter().flatten().copied().collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut valid = vec![true; v.len()];
    if v.len() == 4 {
        let diffs = [v[1] - v[0], v[2] - v[1], v[3] - v[2]];
        let max = diffs.iter().copied().fold(f64::MIN, f64::max);
        let winners: Vec<usize> = (0..3).filter(|&i| diffs[i] == max).collect();
        if winners == [0] {
            valid[0] = false;
        } else if winners == [2] {
            valid[3] = false;
        }
    }
    let kept: Vec<f64> = v
        .iter()
        .zip(&valid)
        .filter(|(_, &ok)| ok)
        .map(|(x, _)| *x)
        .collect();
    Some(kept.iter().sum::<f64>() / kept.len() as f64)
}

// ---------------------------------------------------------------------------
// SSIM by direct 2-D windowed sums.

pub fn oracle_ssim(x: &[f64], y: &[f64], width: usize, height: usize) -> f64 {
    const K: usize = 11;
    let sigma = 1.5f64;
    let mut weights = [[0.0f64; K]; K];
    let mut total = 0.0;
    for (i, row) in weights.iter_mut().enumerate() {
        for (j, w) in row.iter_mut().enumerate() {
            let (di, dj) = (i as f64 - 5.0, j as f64 - 5.0);
            *w = (-(di * di + dj * dj) / (2.0 * sigma * sigma)).exp();
            total += *w;
        }
    }
    let c1 = (0.01f64 * 255.0).powi(2);
    let c2 = (0.03f64 * 255.0).powi(2);
    let mut acc = 0.0;
    let mut count = 0usize;
    for r in 0..=height - K {
        for c in 0..=width - K {
            let (mut mx, mut my, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for i in 0..K {
                for j in 0..K {
                    let w = weights[i][j] / total;
                    let a = x[(r + i) * width + c + j];
                    let b = y[(r + i) * width + c + j];
                    mx += w * a;
                    my += w * b;
                    sxx += w * a * a;
                    syy += w * b * b;
                    sxy += w * a * b;
                }
            }
            let vx = sxx - mx * mx;
            let vy = syy - my * my;
            let cov = sxy - mx * my;
            acc += ((2.0 * mx * my + c1) * (2.0 * cov + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2));
            count += 1;
        }
    }
    acc / count as f64
}

/// Luma of 8-bit quantized samples, computed from the byte values.
pub fn oracle_luma_bytes(img: &Image) -> Vec<f64> {
    let bytes: Vec<f64> = img.samples().iter().map(|s| (s * 255.0).round()).collect();
    if img.channels() == 1 {
        return bytes;
    }
    bytes
        .chunks(3)
        .map(|p| 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2])
        .collect()
}

// ---------------------------------------------------------------------------
// Fixtures.

pub fn random_image(rng: &mut impl Rng, w: usize, h: usize, channels: usize) -> Image {
    Image::from_fn(w, h, channels, |_, _, _| {
        rng.random_range(0..=255u8) as f64 / 255.0
    })
    .unwrap()
}

/// Smooth field plus texture, loosely resembling a photograph.
pub fn synthetic_photo(w: usize, h: usize, channels: usize, seed: u64) -> Image {
    let mut r = rng(seed);
    let phases: Vec<f64> = (0..12)
        .map(|_| r.random_range(0.0..std::f64::consts::TAU))
        .collect();
    Image::from_fn(w, h, channels, |y, x, ch| {
        let (fx, fy) = (x as f64 / w as f64, y as f64 / h as f64);
        let base = 0.5
            + 0.25 * (3.0 * fx + phases[ch]).sin() * (2.0 * fy + phases[ch + 3]).cos()
            + 0.1 * (17.0 * fx + 11.0 * fy + phases[ch + 6]).sin();
        let disc = if (fx - 0.6).powi(2) + (fy - 0.4).powi(2) < 0.04 {
            0.15
        } else {
            0.0
        };
        let stripe = if (x / 40) % 2 == 0 && fy > 0.7 {
            0.1
        } else {
            0.0
        };
        base + disc - stripe + 0.02 * (0.9 * x as f64 * fy + phases[ch + 9]).sin()
    })
    .unwrap()
}

pub fn random_mask(rng: &mut impl Rng, w: usize, h: usize, density: f64) -> ScratchMask {
    ScratchMask::from_fn(w, h, |_, _| rng.random_bool(density)).unwrap()
}
