//! PSNR and SSIM on the 8-bit scale.
//!
//! Both metrics first quantize samples to bytes, so they score what a saved
//! PNG would contain. SSIM uses an 11x11 Gaussian window (sigma 1.5),
//! `C1 = (0.01 * 255)^2`, `C2 = (0.03 * 255)^2`, and averages the SSIM map
//! over the valid region only (no padding).

use crate::error::{Error, Result};
use crate::image::{check_same_dims, quantize, ImageGrid, ScratchMask, LUMA_WEIGHTS};
use crate::scalar::Scalar;

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
pub const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

/// Quantized samples on the 0-255 scale. When the channel counts differ,
/// both sides fall back to luma so a gray image can be scored against RGB.
fn comparable_planes<T: Scalar>(
    a: &ImageGrid<T>,
    b: &ImageGrid<T>,
) -> Result<(Vec<f64>, Vec<f64>, usize)> {
    check_same_dims((a.width(), a.height()), (b.width(), b.height()))?;
    if a.channels() == b.channels() {
        Ok((bytes_f64(a), bytes_f64(b), a.channels()))
    } else {
        Ok((luma_255(a), luma_255(b), 1))
    }
}

fn bytes_f64<T: Scalar>(g: &ImageGrid<T>) -> Vec<f64> {
    g.samples().iter().map(|&s| quantize(s) as f64).collect()
}

/// Luma of the quantized image on the 0-255 scale.
pub fn luma_255<T: Scalar>(g: &ImageGrid<T>) -> Vec<f64> {
    let q = bytes_f64(g);
    if g.channels() == 1 {
        return q;
    }
    q.chunks_exact(3)
        .map(|px| LUMA_WEIGHTS[0] * px[0] + LUMA_WEIGHTS[1] * px[1] + LUMA_WEIGHTS[2] * px[2])
        .collect()
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0 * 255.0 / mse).log10()
    }
}

/// PSNR in dB over every sample; `+inf` for identical quantized images.
pub fn psnr<T: Scalar>(reference: &ImageGrid<T>, test: &ImageGrid<T>) -> Result<f64> {
    let (a, b, _) = comparable_planes(reference, test)?;
    let sse: f64 = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(psnr_from_mse(sse / a.len() as f64))
}

/// PSNR restricted to the lost pixels of `mask`; `+inf` when the mask is empty.
pub fn psnr_masked<T: Scalar>(
    reference: &ImageGrid<T>,
    test: &ImageGrid<T>,
    mask: &ScratchMask,
) -> Result<f64> {
    let (a, b, channels) = comparable_planes(reference, test)?;
    reference.check_mask(mask)?;
    let mut sse = 0.0;
    let mut n = 0usize;
    for (i, _) in mask.as_slice().iter().enumerate().filter(|(_, &m)| m) {
        for ch in 0..channels {
            let d = a[i * channels + ch] - b[i * channels + ch];
            sse += d * d;
            n += 1;
        }
    }
    if n == 0 {
        return Ok(f64::INFINITY);
    }
    Ok(psnr_from_mse(sse / n as f64))
}

/// Normalized 1-D Gaussian taps.
pub fn gaussian_kernel(size: usize, sigma: f64) -> Vec<f64> {
    let centre = (size / 2) as f64;
    let taps: Vec<f64> = (0..size)
        .map(|i| {
            let d = i as f64 - centre;
            (-(d * d) / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let total: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / total).collect()
}

/// Valid-region separable filtering of a `width`x`height` plane.
fn filter_valid(plane: &[f64], width: usize, height: usize, taps: &[f64]) -> Vec<f64> {
    let k = taps.len();
    let (ow, oh) = (width - k + 1, height - k + 1);
    let mut horiz = vec![0.0; ow * height];
    for r in 0..height {
        let row = &plane[r * width..(r + 1) * width];
        for c in 0..ow {
            horiz[r * ow + c] = taps.iter().zip(&row[c..c + k]).map(|(t, v)| t * v).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for r in 0..oh {
        for c in 0..ow {
            out[r * ow + c] = taps
                .iter()
                .enumerate()
                .map(|(i, t)| t * horiz[(r + i) * ow + c])
                .sum();
        }
    }
    out
}

/// Mean SSIM of the luma planes.
pub fn ssim<T: Scalar>(reference: &ImageGrid<T>, test: &ImageGrid<T>) -> Result<f64> {
    check_same_dims(
        (reference.width(), reference.height()),
        (test.width(), test.height()),
    )?;
    ssim_planes(
        &luma_255(reference),
        &luma_255(test),
        reference.width(),
        reference.height(),
    )
}

/// Mean SSIM of two gray planes already on the 0-255 scale.
pub fn ssim_planes(x: &[f64], y: &[f64], width: usize, height: usize) -> Result<f64> {
    if width < SSIM_WINDOW || height < SSIM_WINDOW {
        return Err(Error::ImageTooSmall {
            width,
            height,
            window: SSIM_WINDOW,
        });
    }
    let taps = gaussian_kernel(SSIM_WINDOW, SSIM_SIGMA);
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(y).map(|(a, b)| a * b).collect();
    let mu_x = filter_valid(x, width, height, &taps);
    let mu_y = filter_valid(y, width, height, &taps);
    let e_xx = filter_valid(&xx, width, height, &taps);
    let e_yy = filter_valid(&yy, width, height, &taps);
    let e_xy = filter_valid(&xy, width, height, &taps);

    let total: f64 = (0..mu_x.len())
        .map(|i| {
            let (mx, my) = (mu_x[i], mu_y[i]);
            let var_x = e_xx[i] - mx * mx;
            let var_y = e_yy[i] - my * my;
            let cov = e_xy[i] - mx * my;
            ((2.0 * mx * my + SSIM_C1) * (2.0 * cov + SSIM_C2))
                / ((mx * mx + my * my + SSIM_C1) * (var_x + var_y + SSIM_C2))
        })
        .sum();
    Ok(total / mu_x.len() as f64)
}
