//! Directional variable-density Fourier subsampling with per-shear basis
//! pursuit and dual-filter recombination.

// `!(x > t)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod filter_bank;
pub mod l1;
pub mod phantoms;
pub mod pipeline;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
