//! Directional filters, their duals, the digital shear and the anisotropic
//! wavelet transform.

mod directional;
mod shear;
mod wavelet;
mod windows;

pub use directional::{
    base_filter_spectrum, build_directional_filters, dual_spectra, shear_spectrum,
    DirectionalFilter, DirectionalFilterSet, MIN_COVERAGE,
};
pub use shear::{digital_shear, digital_shear_about, shear_set, Cone, DigitalShear, ShearIndex};
pub use wavelet::{awt_forward, awt_inverse, Split, Wavelet2d, WaveletCoefficients, WaveletPair};
pub use windows::{build_scale_windows, min_grid_size, ScaleWindows};
