//! Subsampled Fourier measurements `y = P_Δ F(u)`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::sampling::SamplingMask;
use crate::spectral::{dft2_real, io, storage, ComplexGrid, RealGrid};

#[derive(Clone, Debug)]
pub struct MeasurementSet {
    n: usize,
    mask: SamplingMask,
    samples: ComplexGrid,
}

impl MeasurementSet {
    /// Pairs stored samples with their mask, checking that nothing is
    /// recorded off the mask.
    pub fn new(mask: SamplingMask, samples: ComplexGrid) -> Result<Self> {
        let n = mask.size();
        if samples.shape() != (n, n) {
            return Err(Error::ShapeMismatch {
                left: samples.shape(),
                right: (n, n),
            });
        }
        let hit = mask.indicator();
        if let Some(k) = samples.data().iter().zip(&hit).position(|(v, &h)| !h && v.norm() != 0.0) {
            return Err(Error::Format(format!(
                "sample at storage index {k} lies off the mask"
            )));
        }
        Ok(Self { n, mask, samples })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> &SamplingMask {
        &self.mask
    }

    /// Masked unnormalized spectrum, DC at storage index (0, 0).
    pub fn samples(&self) -> &ComplexGrid {
        &self.samples
    }

    /// Writes `samples.cifg` and `mask.json` (plus `mask.pgm`) into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        io::write_complex(&dir.join("samples.cifg"), &self.samples)?;
        self.mask.save(&dir.join("mask.json"))
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let mask = SamplingMask::load(&dir.join("mask.json"))?;
        let samples = io::read(&dir.join("samples.cifg"))?.into_complex();
        Self::new(mask, samples)
    }
}

/// Samples the spectrum of `u` on the mask.
pub fn forward_measure(u: &RealGrid, mask: &SamplingMask) -> Result<MeasurementSet> {
    let n = mask.size();
    if u.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            left: u.shape(),
            right: (n, n),
        });
    }
    if !n.is_power_of_two() {
        return Err(Error::InvalidDimensions(format!("grid side {n} is not a power of two")));
    }
    let spectrum = dft2_real(u)?;
    let samples = crate::sampling::mask_apply(&spectrum, mask)?;
    Ok(MeasurementSet {
        n,
        mask: mask.clone(),
        samples,
    })
}

/// Storage indices of `Δ ∪ -Δ`, ascending. For a real image the samples on
/// `-Δ` are the conjugates of those on `Δ`, so no information is added.
pub fn symmetric_support(mask: &SamplingMask) -> Vec<usize> {
    let n = mask.size();
    let mut hit = mask.indicator();
    for g in mask.groups() {
        for &[a, b] in &g.points {
            hit[storage(-a, n) * n + storage(-b, n)] = true;
        }
    }
    hit.iter().enumerate().filter(|(_, &h)| h).map(|(i, _)| i).collect()
}

/// Samples on the symmetric support, filling `-Δ` by conjugation.
pub(crate) fn symmetric_samples(meas: &MeasurementSet, support: &[usize]) -> Vec<num_complex::Complex64> {
    let n = meas.n;
    let hit = meas.mask.indicator();
    let data = meas.samples.data();
    support
        .iter()
        .map(|&k| {
            if hit[k] {
                data[k]
            } else {
                let (a, b) = (k / n, k % n);
                data[((n - a) % n) * n + (n - b) % n].conj()
            }
        })
        .collect()
}
