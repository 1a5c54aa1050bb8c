//! Shear-indexed sampling densities, random masks and the mask operator.

mod density;
mod mask;
mod scaling;

pub use density::{
    continuum_weight, discrete_weight, normalize, radial_weight, theory_grid_size, DensityKind,
    SamplingDensity, DEFAULT_RHO, DISCRETE_EXPONENT, RADIAL_EXPONENT,
};
pub use mask::{
    baseline_radial_mask, baseline_radial_mask_with, draw_mask, draw_mask_for_ratio, draw_mask_with,
    draw_theory_mask, mask_apply, raw_draws, stream_seed, theoretical_count, total_variation,
    MaskConfig, MaskScheme, MaskTarget, PointGroup, SamplingMask, DRAW_POLICY, MASK_FORMAT_VERSION,
};
pub use scaling::{cardinality_bound, cardinality_scaling_check, ScalingReport, ScalingRow, SCALING_TOLERANCE};
