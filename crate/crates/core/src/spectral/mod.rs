//! Grids, the 2-D DFT, circular convolution and image-quality metrics.

mod fft;
mod grid;
pub mod io;
mod metrics;

pub use fft::{circ_conv, dft2, dft2_real, filter_with_spectrum, idft2, Fft2Plan};
pub use grid::{centered, storage, ComplexGrid, RealGrid};
pub use metrics::{mse, psnr};
pub(crate) use grid::same_shape;
