//! Shear-indexed sampling densities over the centered `N×N` frequency grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter_bank::{Cone, ShearIndex};
use crate::spectral::{centered, storage};

/// Default exponent of the discrete directional density.
pub const DISCRETE_EXPONENT: f64 = 5.0;
/// Default exponent of the radial baseline density.
pub const RADIAL_EXPONENT: f64 = 2.0;
/// Default oversampling parameter `ρ`.
pub const DEFAULT_RHO: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityKind {
    /// `1 / (J² (1+|n1|)(1+|n2 - s n1|))`
    Continuum,
    /// `1 / ((1+|n1|)^e (1+|2^(J/2) n2 - s n1|)^e)`
    Discrete,
    /// `1 / (1+‖n‖₂)^e`
    RadialBaseline,
}

/// Unnormalized continuum-scheme density.
pub fn continuum_weight(finest_scale: u32, shear: f64, n1: i64, n2: i64) -> f64 {
    let j = finest_scale as f64;
    let (a, b) = (n1 as f64, n2 as f64);
    1.0 / (j * j * (1.0 + a.abs()) * (1.0 + (b - shear * a).abs()))
}

/// Unnormalized discrete directional density.
pub fn discrete_weight(finest_scale: u32, shear: f64, n1: i64, n2: i64, exponent: f64) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    let aniso = 2f64.powf(finest_scale as f64 / 2.0);
    ((1.0 + a.abs()) * (1.0 + (aniso * b - shear * a).abs())).powf(-exponent)
}

/// Unnormalized radial baseline density.
pub fn radial_weight(n1: i64, n2: i64, exponent: f64) -> f64 {
    let r = ((n1 * n1 + n2 * n2) as f64).sqrt();
    (1.0 + r).powf(-exponent)
}

/// Normalization constant `c` with `c · Σ w = 1`.
pub fn normalize(weights: &[f64]) -> Result<f64> {
    if weights.is_empty() {
        return Err(Error::InvalidParameter("cannot normalize over an empty domain".into()));
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::InvalidParameter(format!("density mass {total} is not normalizable")));
    }
    Ok(1.0 / total)
}

/// Side of the theory-check domain `Ω_J`: `2^ceil(J(1+ρ))`.
pub fn theory_grid_size(finest_scale: u32, rho: f64) -> usize {
    1usize << ((finest_scale as f64 * (1.0 + rho)).ceil() as u32)
}

/// A normalized density on the full centered `N×N` grid `Ω_J`. Vertical-cone
/// densities swap the roles of `n1` and `n2`.
#[derive(Clone, Debug)]
pub struct SamplingDensity {
    kind: DensityKind,
    n: usize,
    finest_scale: u32,
    shear: ShearIndex,
    cone: Cone,
    exponent: f64,
    constant: f64,
    probs: Vec<f64>,
}

impl SamplingDensity {
    fn build(
        kind: DensityKind,
        n: usize,
        finest_scale: u32,
        shear: ShearIndex,
        cone: Cone,
        exponent: f64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("empty sampling domain".into()));
        }
        if kind != DensityKind::RadialBaseline && finest_scale == 0 {
            return Err(Error::InvalidParameter("finest scale must be positive".into()));
        }
        let s = shear.value();
        let mut probs = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let (f1, f2) = (centered(a, n), centered(b, n));
                let (n1, n2) = match cone {
                    Cone::Horizontal => (f1, f2),
                    Cone::Vertical => (f2, f1),
                };
                probs.push(match kind {
                    DensityKind::Continuum => continuum_weight(finest_scale, s, n1, n2),
                    DensityKind::Discrete => discrete_weight(finest_scale, s, n1, n2, exponent),
                    DensityKind::RadialBaseline => radial_weight(n1, n2, exponent),
                });
            }
        }
        let constant = normalize(&probs)?;
        probs.iter_mut().for_each(|p| *p *= constant);
        Ok(Self {
            kind,
            n,
            finest_scale,
            shear,
            cone,
            exponent,
            constant,
            probs,
        })
    }

    pub fn continuum(n: usize, finest_scale: u32, shear: ShearIndex, cone: Cone) -> Result<Self> {
        Self::build(DensityKind::Continuum, n, finest_scale, shear, cone, 1.0)
    }

    pub fn discrete(
        n: usize,
        finest_scale: u32,
        shear: ShearIndex,
        cone: Cone,
        exponent: f64,
    ) -> Result<Self> {
        Self::build(DensityKind::Discrete, n, finest_scale, shear, cone, exponent)
    }

    pub fn radial(n: usize, exponent: f64) -> Result<Self> {
        Self::build(
            DensityKind::RadialBaseline,
            n,
            0,
            ShearIndex::ZERO,
            Cone::Horizontal,
            exponent,
        )
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn finest_scale(&self) -> u32 {
        self.finest_scale
    }

    pub fn shear(&self) -> ShearIndex {
        self.shear
    }

    pub fn cone(&self) -> Cone {
        self.cone
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// The normalization constant `c_s`.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// Probabilities in storage layout (DC at index 0).
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn contains(&self, n1: i64, n2: i64) -> bool {
        let half = (self.n / 2) as i64;
        let lo = -half;
        let hi = self.n as i64 - half;
        (lo..hi).contains(&n1) && (lo..hi).contains(&n2)
    }

    /// Probability of the signed frequency `(n1, n2)`.
    pub fn prob(&self, n1: i64, n2: i64) -> Result<f64> {
        if !self.contains(n1, n2) {
            return Err(Error::OutsideDomain(n1, n2));
        }
        Ok(self.probs[storage(n1, self.n) * self.n + storage(n2, self.n)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> ShearIndex {
        ShearIndex::new(1, 1).unwrap()
    }

    #[test]
    fn continuum_formula_values() {
        assert!((continuum_weight(4, 0.5, 0, 0) - 1.0 / 16.0).abs() < 1e-15);
        let s = ShearIndex::new(1, 0).unwrap().value();
        let r = continuum_weight(4, s, 1, 1) / continuum_weight(4, s, 0, 0);
        assert!((r - 0.5).abs() < 1e-15);
    }

    #[test]
    fn discrete_formula_values() {
        assert_eq!(discrete_weight(2, 0.0, 0, 0, 5.0), 1.0);
        assert!((discrete_weight(2, 0.0, 1, 0, 5.0) - 1.0 / 32.0).abs() < 1e-15);
        for (a, b) in [(3, 2), (1, 7), (5, 0)] {
            let w = discrete_weight(4, 0.0, a, b, 5.0);
            assert_eq!(w, discrete_weight(4, 0.0, -a, b, 5.0));
            assert_eq!(w, discrete_weight(4, 0.0, a, -b, 5.0));
        }
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize(&[3.0, 3.0]).unwrap() * 3.0, 0.5);
        assert_eq!(normalize(&[0.25]).unwrap() * 0.25, 1.0);
        assert!(normalize(&[]).is_err());
        let d = SamplingDensity::discrete(1, 2, ShearIndex::ZERO, Cone::Horizontal, 5.0).unwrap();
        assert_eq!(d.prob(0, 0).unwrap(), 1.0);
    }

    #[test]
    fn densities_sum_to_one() {
        for s in [ShearIndex::ZERO, half(), ShearIndex::new(-3, 2).unwrap()] {
            for cone in Cone::BOTH {
                for d in [
                    SamplingDensity::discrete(32, 4, s, cone, 5.0).unwrap(),
                    SamplingDensity::continuum(32, 4, s, cone).unwrap(),
                ] {
                    let total: f64 = d.probabilities().iter().sum();
                    assert!((total - 1.0).abs() < 1e-10);
                    assert!(d.probabilities().iter().all(|&p| p > 0.0));
                }
            }
        }
        let r = SamplingDensity::radial(16, 2.0).unwrap();
        assert!((r.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn normalization_anchor_discrete_j2_n32() {
        // c_s by direct summation over the 32x32 centered grid
        let mut total = 0.0;
        for n1 in -16i64..16 {
            for n2 in -16i64..16 {
                let a = (1.0 + (n1 as f64).abs()).powi(5);
                let b = (1.0 + (2.0 * n2 as f64 - 0.5 * n1 as f64).abs()).powi(5);
                total += 1.0 / (a * b);
            }
        }
        let d = SamplingDensity::discrete(32, 2, half(), Cone::Horizontal, 5.0).unwrap();
        assert!((d.constant() - 1.0 / total).abs() < 1e-12);
        assert!((d.constant() - C_S_J2_N32).abs() < 1e-9, "{}", d.constant());
    }

    const C_S_J2_N32: f64 = 0.980_722_237_811_521_9;

    #[test]
    fn continuum_constant_is_bounded_uniformly() {
        let cs: Vec<f64> = crate::filter_bank::shear_set(4)
            .unwrap()
            .into_iter()
            .map(|s| SamplingDensity::continuum(64, 4, s, Cone::Horizontal).unwrap().constant())
            .collect();
        let (lo, hi) = cs.iter().fold((f64::MAX, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
        assert!(lo > 0.0);
        assert!(hi / lo < 1.5, "{cs:?}");
    }

    #[test]
    fn radial_ratio_and_domain() {
        let r = radial_weight(0, 0, 2.0) / radial_weight(1, 0, 2.0);
        assert!((r - 4.0).abs() < 1e-15);
        let d = SamplingDensity::radial(8, 2.0).unwrap();
        assert!(d.prob(-4, 3).is_ok());
        assert!(matches!(d.prob(4, 0), Err(Error::OutsideDomain(4, 0))));
    }

    #[test]
    fn vertical_cone_swaps_axes() {
        let s = half();
        let h = SamplingDensity::discrete(16, 2, s, Cone::Horizontal, 5.0).unwrap();
        let v = SamplingDensity::discrete(16, 2, s, Cone::Vertical, 5.0).unwrap();
        assert_eq!(h.prob(3, -2).unwrap(), v.prob(-2, 3).unwrap());
    }

    #[test]
    fn s0_marginal_decays_in_n2() {
        let d = SamplingDensity::discrete(32, 2, ShearIndex::ZERO, Cone::Horizontal, 5.0).unwrap();
        for n1 in -16..16 {
            for n2 in 0..15 {
                assert!(d.prob(n1, n2).unwrap() > d.prob(n1, n2 + 1).unwrap());
                assert!(d.prob(n1, -n2).unwrap() > d.prob(n1, -n2 - 1).unwrap());
            }
        }
    }

    #[test]
    fn theory_sizes() {
        assert_eq!(theory_grid_size(2, 0.05), 8);
        assert_eq!(theory_grid_size(4, 0.05), 32);
        assert_eq!(theory_grid_size(6, 0.05), 128);
    }
}
