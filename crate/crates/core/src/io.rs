//! PNG reading and writing for images and masks.
//!
//! Images are 8-bit gray or RGB (an alpha channel is dropped on load).
//! Masks are 8-bit gray; a byte above 127 marks a lost pixel.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageFormat};

use crate::error::{Error, Result};
use crate::image::{ImageGrid, ScratchMask};
use crate::scalar::Scalar;

/// Mask bytes strictly above this value mark a lost pixel.
pub const MASK_THRESHOLD: u8 = 127;

fn read_file(path: &Path) -> Result<Vec<u8>> {
    if !path.exists() {
        return Err(Error::NotFound(path.to_path_buf()));
    }
    fs::read(path).map_err(|e| Error::io(path, e))
}

fn decode_png(bytes: &[u8]) -> Result<DynamicImage> {
    match image::guess_format(bytes) {
        Ok(ImageFormat::Png) => {}
        Ok(other) => {
            return Err(Error::UnsupportedFormat(format!(
                "{other:?} (only PNG is accepted)"
            )))
        }
        Err(_) => return Err(Error::UnsupportedFormat("not a PNG file".into())),
    }
    image::load_from_memory_with_format(bytes, ImageFormat::Png)
        .map_err(|e| Error::Decode(e.to_string()))
}

/// Returns `(width, height, channels, bytes)` for an 8-bit gray or RGB raster.
fn raw_8bit(img: DynamicImage) -> Result<(usize, usize, usize, Vec<u8>)> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    match img {
        DynamicImage::ImageLuma8(buf) => Ok((w, h, 1, buf.into_raw())),
        DynamicImage::ImageLumaA8(_) => Ok((w, h, 1, img.to_luma8().into_raw())),
        DynamicImage::ImageRgb8(buf) => Ok((w, h, 3, buf.into_raw())),
        DynamicImage::ImageRgba8(_) => Ok((w, h, 3, img.to_rgb8().into_raw())),
        other => Err(Error::UnsupportedFormat(format!(
            "{:?} (only 8-bit gray or RGB is accepted)",
            other.color()
        ))),
    }
}

pub fn decode_image<T: Scalar>(bytes: &[u8]) -> Result<ImageGrid<T>> {
    let (w, h, channels, raw) = raw_8bit(decode_png(bytes)?)?;
    ImageGrid::from_bytes(w, h, channels, &raw)
}

pub fn load_image<T: Scalar>(path: impl AsRef<Path>) -> Result<ImageGrid<T>> {
    decode_image(&read_file(path.as_ref())?)
}

pub fn encode_png<T: Scalar>(grid: &ImageGrid<T>) -> Result<Vec<u8>> {
    let color = match grid.channels() {
        1 => ExtendedColorType::L8,
        _ => ExtendedColorType::Rgb8,
    };
    encode_raw(&grid.to_bytes(), grid.width(), grid.height(), color)
}

fn encode_raw(
    bytes: &[u8],
    width: usize,
    height: usize,
    color: ExtendedColorType,
) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    image::codecs::png::PngEncoder::new(Cursor::new(&mut out))
        .write_image(bytes, width as u32, height as u32, color)
        .map_err(|e| Error::Decode(e.to_string()))?;
    Ok(out)
}

pub fn save_image<T: Scalar>(grid: &ImageGrid<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let png = encode_png(grid)?;
    fs::write(path, png).map_err(|e| Error::io(path, e))
}

pub fn decode_mask(bytes: &[u8]) -> Result<ScratchMask> {
    let (w, h, channels, raw) = raw_8bit(decode_png(bytes)?)?;
    if channels != 1 {
        return Err(Error::MultiChannelMask { channels });
    }
    ScratchMask::new(w, h, raw.into_iter().map(|b| b > MASK_THRESHOLD).collect())
}

pub fn load_mask(path: impl AsRef<Path>) -> Result<ScratchMask> {
    decode_mask(&read_file(path.as_ref())?)
}

/// Gray PNG with 255 for lost pixels and 0 elsewhere.
pub fn encode_mask(mask: &ScratchMask) -> Result<Vec<u8>> {
    encode_raw(
        &mask.to_bytes(),
        mask.width(),
        mask.height(),
        ExtendedColorType::L8,
    )
}

pub fn save_mask(mask: &ScratchMask, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let png = encode_mask(mask)?;
    fs::write(path, png).map_err(|e| Error::io(path, e))
}

/// Encodes raw 8-bit samples as PNG; `channels` is 1 (gray) or 3 (RGB).
pub fn encode_bytes(bytes: &[u8], width: usize, height: usize, channels: usize) -> Result<Vec<u8>> {
    let color = match channels {
        1 => ExtendedColorType::L8,
        3 => ExtendedColorType::Rgb8,
        4 => ExtendedColorType::Rgba8,
        n => {
            return Err(Error::InvalidParameter(format!(
                "cannot encode {n}-channel bytes"
            )))
        }
    };
    encode_raw(bytes, width, height, color)
}
