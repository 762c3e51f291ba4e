//! Scratch inpainting by edge-aware fusion of directional cubic splines.
//!
//! For every lost pixel the engine picks known neighbors adaptively along
//! four directions (horizontal, vertical and both diagonals), predicts the
//! pixel with a natural cubic spline in each direction, senses horizontal or
//! vertical edges from the rows/columns flanking the neighbors, and fuses the
//! predictions: along a detected edge the aligned prediction wins, otherwise
//! an outlying extreme is discarded and the rest averaged.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common choice.
//!
//! ```
//! use adaptive_inpaint::{inpaint, Image, InpaintConfig, ScratchMask};
//!
//! let image = Image::from_fn(32, 32, 1, |_, c, _| c as f64 / 31.0).unwrap();
//! let mask = ScratchMask::from_fn(32, 32, |r, _| r == 16).unwrap();
//! let restored = inpaint(&image, &mask, &InpaintConfig::default()).unwrap();
//! assert!((restored.get(16, 10, 0) - 10.0 / 31.0).abs() < 1e-9);
//! ```

pub mod baseline;
pub mod bench;
pub mod edge;
pub mod engine;
mod error;
pub mod fusion;
pub mod image;
pub mod io;
pub mod locality;
pub mod maskgen;
pub mod metrics;
mod scalar;
pub mod spline;

pub use edge::{classify, EdgeClass, EdgeOrientation};
pub use engine::{
    inpaint, inpaint_file, inpaint_with_stats, InpaintConfig, InpaintStats, InpaintTiming,
};
pub use error::{Error, Result};
pub use fusion::{fuse, DirectionalPredictions};
pub use image::{Coord, Direction, ImageGrid, ScratchMask};
pub use io::{
    decode_image, decode_mask, encode_mask, encode_png, load_image, load_mask, save_image,
    save_mask,
};
pub use locality::{
    extract_auxiliary, select_neighbors, AuxiliaryVectors, Axis, NeighborSelection,
};
pub use maskgen::{generate_mask, LineMaskSpec};
pub use metrics::{psnr, psnr_masked, ssim};
pub use scalar::Scalar;
pub use spline::{predict_direction, Spline};

/// Double-precision image, the default working type.
pub type Image = ImageGrid<f64>;
/// Single-precision image.
pub type Image32 = ImageGrid<f32>;
pub type Spline64 = Spline<f64>;
pub type Spline32 = Spline<f32>;
pub type Predictions = DirectionalPredictions<f64>;
pub type Selection = NeighborSelection<f64>;
pub type Auxiliary = AuxiliaryVectors<f64>;
