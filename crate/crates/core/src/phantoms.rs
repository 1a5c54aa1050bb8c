//! Cartoon-like test images `f = f0 + jump · f1 · χ_B` on `[0,1]²`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::RealGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhantomKind {
    Disk,
    Ellipse,
    TwoRegionSmooth,
}

/// A quadratic `c0 + c1 x1 + c2 x2 + c3 x1² + c4 x1 x2 + c5 x2²`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quadratic(pub [f64; 6]);

impl Quadratic {
    pub fn constant(c: f64) -> Self {
        Quadratic([c, 0.0, 0.0, 0.0, 0.0, 0.0])
    }

    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        let c = &self.0;
        c[0] + c[1] * x1 + c[2] * x2 + c[3] * x1 * x1 + c[4] * x1 * x2 + c[5] * x2 * x2
    }
}

/// Coordinates are normalized: `x1` runs down the rows, `x2` across columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhantomSpec {
    pub kind: PhantomKind,
    #[serde(rename = "N")]
    pub size: usize,
    pub center: [f64; 2],
    /// Semi-axes; equal for a disk.
    pub radii: [f64; 2],
    /// Rotation of the first semi-axis, in radians.
    #[serde(default)]
    pub angle: f64,
    #[serde(default)]
    pub background: Quadratic,
    #[serde(default = "unit_interior")]
    pub interior: Quadratic,
    pub jump: f64,
}

fn unit_interior() -> Quadratic {
    Quadratic::constant(1.0)
}

impl PhantomSpec {
    /// Unit-height disk of radius 0.25 at the center.
    pub fn disk(size: usize) -> Self {
        Self {
            kind: PhantomKind::Disk,
            size,
            center: [0.5, 0.5],
            radii: [0.25, 0.25],
            angle: 0.0,
            background: Quadratic::default(),
            interior: unit_interior(),
            jump: 1.0,
        }
    }

    pub fn ellipse(size: usize) -> Self {
        Self {
            kind: PhantomKind::Ellipse,
            size,
            center: [0.5, 0.45],
            radii: [0.3, 0.18],
            angle: 0.5,
            background: Quadratic::default(),
            interior: unit_interior(),
            jump: 1.0,
        }
    }

    /// Smooth background with a smoothly varying elliptical inclusion.
    pub fn two_region_smooth(size: usize) -> Self {
        Self {
            kind: PhantomKind::TwoRegionSmooth,
            size,
            center: [0.48, 0.52],
            radii: [0.28, 0.2],
            angle: -0.4,
            background: Quadratic([0.1, 0.1, 0.05, 0.0, 0.1, 0.0]),
            interior: Quadratic([0.6, 0.2, -0.1, 0.0, 0.0, 0.1]),
            jump: 1.0,
        }
    }

    pub fn preset(kind: PhantomKind, size: usize) -> Self {
        match kind {
            PhantomKind::Disk => Self::disk(size),
            PhantomKind::Ellipse => Self::ellipse(size),
            PhantomKind::TwoRegionSmooth => Self::two_region_smooth(size),
        }
    }

    fn inside(&self, x1: f64, x2: f64) -> bool {
        let (s, c) = self.angle.sin_cos();
        let (d1, d2) = (x1 - self.center[0], x2 - self.center[1]);
        let u = (c * d1 + s * d2) / self.radii[0];
        let v = (-s * d1 + c * d2) / self.radii[1];
        u * u + v * v <= 1.0
    }

    pub fn validate(&self) -> Result<()> {
        if !self.size.is_power_of_two() {
            return Err(Error::InvalidDimensions(format!(
                "phantom size must be a power of two, got {}",
                self.size
            )));
        }
        let finite = self.center.iter().chain(&self.radii).chain(&self.background.0).chain(&self.interior.0);
        if finite.chain([&self.angle, &self.jump]).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("phantom parameters must be finite".into()));
        }
        let [a, b] = self.radii;
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidParameter("radii must be positive".into()));
        }
        if self.kind == PhantomKind::Disk && a != b {
            return Err(Error::InvalidParameter("a disk needs equal radii".into()));
        }
        let (s, c) = self.angle.sin_cos();
        let half1 = (a * a * c * c + b * b * s * s).sqrt();
        let half2 = (a * a * s * s + b * b * c * c).sqrt();
        let [c1, c2] = self.center;
        if c1 - half1 < 0.0 || c1 + half1 > 1.0 || c2 - half2 < 0.0 || c2 + half2 > 1.0 {
            return Err(Error::InvalidParameter("the region escapes the unit square".into()));
        }
        Ok(())
    }
}

/// Samples the phantom at the cell centers of an `N×N` grid.
pub fn render(spec: &PhantomSpec) -> Result<RealGrid> {
    spec.validate()?;
    let n = spec.size;
    let h = 1.0 / n as f64;
    let img = RealGrid::from_fn(n, n, |i, j| {
        let (x1, x2) = ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
        let mut v = spec.background.eval(x1, x2);
        if spec.inside(x1, x2) {
            v += spec.jump * spec.interior.eval(x1, x2);
        }
        v
    });
    if let Some(index) = img.data().iter().position(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::InvalidParameter(format!(
            "phantom intensity {} at pixel {index} leaves [0, 1]",
            img.data()[index]
        )));
    }
    Ok(img)
}

impl PhantomSpec {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_center_and_corner() {
        let img = render(&PhantomSpec::disk(64)).unwrap();
        assert_eq!(img.get(32, 32), 1.0);
        assert_eq!(img.get(0, 0), 0.0);
        assert_eq!(img.get(63, 63), 0.0);
    }

    #[test]
    fn disk_area() {
        let img = render(&PhantomSpec::disk(256)).unwrap();
        let frac = img.data().iter().filter(|&&v| v == 1.0).count() as f64 / (256.0 * 256.0);
        assert!((frac - std::f64::consts::PI * 0.0625).abs() < 1e-3, "{frac}");
    }

    #[test]
    fn zero_jump_is_background() {
        let mut spec = PhantomSpec::two_region_smooth(32);
        spec.jump = 0.0;
        let img = render(&spec).unwrap();
        for i in 0..32 {
            for j in 0..32 {
                let want = spec.background.eval((i as f64 + 0.5) / 32.0, (j as f64 + 0.5) / 32.0);
                assert_eq!(img.get(i, j), want);
            }
        }
    }

    #[test]
    fn presets_render_in_range() {
        for kind in [PhantomKind::Disk, PhantomKind::Ellipse, PhantomKind::TwoRegionSmooth] {
            let img = render(&PhantomSpec::preset(kind, 64)).unwrap();
            assert!(img.data().iter().any(|&v| v > 0.5));
            assert_eq!(img, render(&PhantomSpec::preset(kind, 64)).unwrap());
        }
    }

    #[test]
    fn rejects_escaping_region() {
        let mut spec = PhantomSpec::disk(32);
        spec.center = [0.2, 0.5];
        assert!(render(&spec).is_err());
        let mut spec = PhantomSpec::ellipse(32);
        spec.radii = [0.49, 0.1];
        spec.angle = std::f64::consts::FRAC_PI_4;
        assert!(render(&spec).is_ok());
        spec.angle = 0.0;
        spec.center = [0.45, 0.5];
        assert!(render(&spec).is_err());
        assert!(render(&PhantomSpec::disk(48)).is_err());
    }

    #[test]
    fn rejects_out_of_range_intensity() {
        let mut spec = PhantomSpec::disk(16);
        spec.background = Quadratic::constant(0.5);
        assert!(render(&spec).is_err());
    }

    #[test]
    fn json_round_trip() {
        let spec = PhantomSpec::two_region_smooth(128);
        let text = spec.to_json().unwrap();
        assert!(text.contains("\"two-region-smooth\""));
        assert_eq!(PhantomSpec::from_json(&text).unwrap(), spec);
        let minimal = r#"{"kind":"disk","N":32,"center":[0.5,0.5],"radii":[0.2,0.2],"jump":1.0}"#;
        assert_eq!(render(&PhantomSpec::from_json(minimal).unwrap()).unwrap().get(16, 16), 1.0);
    }
}
