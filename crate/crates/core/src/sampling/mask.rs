//! Random per-shear sampling masks and the mask operator.

use std::cmp::Ordering;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density::{
    theory_grid_size, DensityKind, SamplingDensity, DEFAULT_RHO, DISCRETE_EXPONENT,
    RADIAL_EXPONENT,
};
use crate::error::{Error, Result};
use crate::filter_bank::{shear_set, Cone, ShearIndex};
use crate::spectral::{centered, io, storage, ComplexGrid, RealGrid};

pub const MASK_FORMAT_VERSION: u32 = 1;

/// Identifier written to mask manifests. Points are drawn i.i.d. and
/// duplicates within one shear are rejected until enough distinct points
/// remain.
pub const DRAW_POLICY: &str = "iid-dedup";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaskScheme {
    Directional,
    Radial,
}

/// How many points each shear receives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskTarget {
    /// The same count for every shear.
    PerShearM(usize),
    /// Smallest common per-shear count whose union keeps `⌊ratio·N²⌋` points.
    Ratio(f64),
    /// Per-shear counts `ceil(2^((J - j0)/2) · 2^(3Jρ))`.
    Theory,
}

/// The points drawn for a single shear and cone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointGroup {
    pub q: i64,
    pub level: u32,
    pub cone: Option<Cone>,
    pub points: Vec<[i64; 2]>,
}

impl PointGroup {
    pub fn shear(&self) -> Result<ShearIndex> {
        ShearIndex::new(self.q, self.level)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingMask {
    version: u32,
    library_version: String,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "J")]
    finest_scale: Option<u32>,
    rho: f64,
    seed: u64,
    scheme: MaskScheme,
    ratio_or_per_shear_m: MaskTarget,
    density: DensityKind,
    exponent: f64,
    draw_policy: String,
    shears: Vec<PointGroup>,
}

impl SamplingMask {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn finest_scale(&self) -> Option<u32> {
        self.finest_scale
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn scheme(&self) -> MaskScheme {
        self.scheme
    }

    pub fn target(&self) -> MaskTarget {
        self.ratio_or_per_shear_m
    }

    pub fn density(&self) -> DensityKind {
        self.density
    }

    pub fn draw_policy(&self) -> &str {
        &self.draw_policy
    }

    pub fn groups(&self) -> &[PointGroup] {
        &self.shears
    }

    /// Membership of the union `Δ_J` in storage layout (DC at index 0).
    pub fn indicator(&self) -> Vec<bool> {
        let n = self.n;
        let mut hit = vec![false; n * n];
        for g in &self.shears {
            for &[a, b] in &g.points {
                hit[storage(a, n) * n + storage(b, n)] = true;
            }
        }
        hit
    }

    /// The union `Δ_J`, sorted lexicographically.
    pub fn union_points(&self) -> Vec<[i64; 2]> {
        let mut pts: Vec<[i64; 2]> = self.shears.iter().flat_map(|g| g.points.iter().copied()).collect();
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    pub fn cardinality(&self) -> usize {
        self.indicator().iter().filter(|&&b| b).count()
    }

    /// Achieved fraction `#Δ_J / N²`.
    pub fn kept_fraction(&self) -> f64 {
        self.cardinality() as f64 / (self.n * self.n) as f64
    }

    /// Image of the mask with the zero frequency at the center, 255 where sampled.
    pub fn render(&self) -> RealGrid {
        let n = self.n;
        let hit = self.indicator();
        RealGrid::from_fn(n, n, |i, j| {
            let a = storage(i as i64 - (n / 2) as i64, n);
            let b = storage(j as i64 - (n / 2) as i64, n);
            if hit[a * n + b] {
                255.0
            } else {
                0.0
            }
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mask: SamplingMask = serde_json::from_str(text)?;
        mask.validate()?;
        Ok(mask)
    }

    /// Writes the JSON manifest and a PGM rendering next to it.
    pub fn save(&self, json_path: &Path) -> Result<()> {
        std::fs::write(json_path, self.to_json()?).map_err(|e| Error::io(json_path, e))?;
        io::write_pgm(&json_path.with_extension("pgm"), &self.render())
    }

    pub fn load(json_path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(json_path).map_err(|e| Error::io(json_path, e))?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.version != MASK_FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported mask version {}", self.version)));
        }
        if self.n == 0 {
            return Err(Error::Format("mask grid size is zero".into()));
        }
        let lo = -((self.n / 2) as i64);
        let hi = lo + self.n as i64;
        for g in &self.shears {
            g.shear()?;
            for w in g.points.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::Format(format!(
                        "points of shear {}/2^{} are not sorted and distinct",
                        g.q, g.level
                    )));
                }
            }
            if let Some(&[a, b]) = g.points.iter().find(|p| !(lo..hi).contains(&p[0]) || !(lo..hi).contains(&p[1])) {
                return Err(Error::OutsideDomain(a, b));
            }
        }
        Ok(())
    }
}

/// Full description of a directional mask draw.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaskConfig {
    pub size: usize,
    pub finest_scale: u32,
    pub seed: u64,
    pub target: MaskTarget,
    pub density: DensityKind,
    pub exponent: f64,
    pub rho: f64,
}

impl MaskConfig {
    pub fn new(size: usize, finest_scale: u32, seed: u64, target: MaskTarget) -> Self {
        Self {
            size,
            finest_scale,
            seed,
            target,
            density: DensityKind::Discrete,
            exponent: DISCRETE_EXPONENT,
            rho: DEFAULT_RHO,
        }
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Stable seed of the random stream owned by one `(seed, shear, cone)`.
pub fn stream_seed(seed: u64, shear: ShearIndex, cone: Option<Cone>) -> u64 {
    let cone_id = cone.map_or(2, |c| c.id());
    let mut h = splitmix(seed);
    h = splitmix(h ^ shear.q() as u64);
    h = splitmix(h ^ shear.level() as u64);
    splitmix(h ^ cone_id)
}

fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Orders the domain as a sequence of i.i.d. draws from `probs` with repeats
/// discarded: each point gets the key `E / p` with `E ~ Exp(1)` and the keys
/// are sorted ascending. Taking the first `m` indices is distributed exactly
/// like drawing until `m` distinct points have appeared.
fn dedup_order(probs: &[f64], rng: &mut ChaCha8Rng, take: Option<usize>) -> Vec<usize> {
    let mut keys: Vec<(f64, usize)> = probs
        .iter()
        .enumerate()
        .map(|(i, &p)| (-open_unit(rng).ln() / p, i))
        .collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if let Some(m) = take {
        if m < keys.len() {
            keys.select_nth_unstable_by(m, cmp);
            keys.truncate(m);
        }
    }
    keys.sort_unstable_by(cmp);
    keys.into_iter().map(|(_, i)| i).collect()
}

fn to_points(order: &[usize], n: usize) -> Vec<[i64; 2]> {
    let mut pts: Vec<[i64; 2]> = order.iter().map(|&i| [centered(i / n, n), centered(i % n, n)]).collect();
    pts.sort_unstable();
    pts
}

/// `ceil(2^((J - j0)/2) · 2^(3Jρ))` for a shear generated at scale `j0`.
pub fn theoretical_count(finest_scale: u32, shear: ShearIndex, rho: f64) -> usize {
    let j = finest_scale as f64;
    let j0 = shear.generation_scale() as f64;
    (2f64.powf((j - j0) / 2.0) * 2f64.powf(3.0 * j * rho)).ceil() as usize
}

fn check_ratio(ratio: f64, n: usize) -> Result<usize> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InvalidParameter(format!("ratio must lie in (0, 1], got {ratio}")));
    }
    let target = (ratio * (n * n) as f64).floor() as usize;
    if target == 0 {
        return Err(Error::InvalidParameter(format!(
            "ratio {ratio} keeps no point of a {n}x{n} grid"
        )));
    }
    Ok(target)
}

fn union_size(orders: &[Vec<usize>], m: usize, seen: &mut [u32], stamp: u32) -> usize {
    let mut count = 0;
    for o in orders {
        for &i in &o[..m.min(o.len())] {
            if seen[i] != stamp {
                seen[i] = stamp;
                count += 1;
            }
        }
    }
    count
}

/// Draws one point set per shear of `shear_set(J)` and cone.
pub fn draw_mask_with(cfg: &MaskConfig) -> Result<SamplingMask> {
    let n = cfg.size;
    if n == 0 {
        return Err(Error::InvalidParameter("grid size must be positive".into()));
    }
    let available = n * n;
    let shears = shear_set(cfg.finest_scale)?;
    let keys: Vec<(Cone, ShearIndex)> = Cone::BOTH
        .iter()
        .flat_map(|&c| shears.iter().map(move |&s| (c, s)))
        .collect();
    let counts: Vec<Option<usize>> = match cfg.target {
        MaskTarget::PerShearM(m) => {
            if m == 0 {
                return Err(Error::InvalidParameter("per-shear count must be at least 1".into()));
            }
            if m > available {
                return Err(Error::TooManyPoints { requested: m, available });
            }
            vec![Some(m); keys.len()]
        }
        MaskTarget::Theory => keys
            .iter()
            .map(|&(_, s)| {
                let m = theoretical_count(cfg.finest_scale, s, cfg.rho);
                if m > available {
                    Err(Error::TooManyPoints { requested: m, available })
                } else {
                    Ok(Some(m))
                }
            })
            .collect::<Result<_>>()?,
        MaskTarget::Ratio(r) => {
            check_ratio(r, n)?;
            vec![None; keys.len()]
        }
    };
    let orders: Vec<Vec<usize>> = keys
        .par_iter()
        .zip(counts.par_iter())
        .map(|(&(cone, s), &take)| {
            let density = match cfg.density {
                DensityKind::Discrete => {
                    SamplingDensity::discrete(n, cfg.finest_scale, s, cone, cfg.exponent)
                }
                DensityKind::Continuum => SamplingDensity::continuum(n, cfg.finest_scale, s, cone),
                DensityKind::RadialBaseline => SamplingDensity::radial(n, cfg.exponent),
            }?;
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, s, Some(cone)));
            Ok(dedup_order(density.probabilities(), &mut rng, take))
        })
        .collect::<Result<_>>()?;
    let orders = match cfg.target {
        MaskTarget::Ratio(r) => {
            let target = check_ratio(r, n)?;
            let mut seen = vec![0u32; available];
            let (mut lo, mut hi) = (1usize, available);
            let mut stamp = 0;
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                stamp += 1;
                if union_size(&orders, mid, &mut seen, stamp) >= target {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            orders.into_iter().map(|mut o| {
                o.truncate(lo);
                o
            }).collect()
        }
        _ => orders,
    };
    let groups = keys
        .iter()
        .zip(&orders)
        .map(|(&(cone, s), o)| PointGroup {
            q: s.q(),
            level: s.level(),
            cone: Some(cone),
            points: to_points(o, n),
        })
        .collect();
    Ok(SamplingMask {
        version: MASK_FORMAT_VERSION,
        library_version: crate::VERSION.to_string(),
        n,
        finest_scale: Some(cfg.finest_scale),
        rho: cfg.rho,
        seed: cfg.seed,
        scheme: MaskScheme::Directional,
        ratio_or_per_shear_m: cfg.target,
        density: cfg.density,
        exponent: cfg.exponent,
        draw_policy: DRAW_POLICY.to_string(),
        shears: groups,
    })
}

/// Directional mask with `m` points per shear from the discrete density.
pub fn draw_mask(finest_scale: u32, n: usize, m: usize, seed: u64) -> Result<SamplingMask> {
    draw_mask_with(&MaskConfig::new(n, finest_scale, seed, MaskTarget::PerShearM(m)))
}

/// Directional mask whose union keeps at least `⌊ratio·N²⌋` frequencies.
pub fn draw_mask_for_ratio(finest_scale: u32, n: usize, ratio: f64, seed: u64) -> Result<SamplingMask> {
    draw_mask_with(&MaskConfig::new(n, finest_scale, seed, MaskTarget::Ratio(ratio)))
}

/// Continuum-density mask on `Ω_J` of side `2^ceil(J(1+ρ))` with theoretical counts.
pub fn draw_theory_mask(finest_scale: u32, rho: f64, seed: u64) -> Result<SamplingMask> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    let n = theory_grid_size(finest_scale, rho);
    draw_mask_with(&MaskConfig {
        size: n,
        finest_scale,
        seed,
        target: MaskTarget::Theory,
        density: DensityKind::Continuum,
        exponent: 1.0,
        rho,
    })
}

/// Variable-density baseline: `⌊ratio·N²⌋` distinct points from `∝ 1/(1+‖n‖)^e`.
pub fn baseline_radial_mask_with(n: usize, ratio: f64, seed: u64, exponent: f64) -> Result<SamplingMask> {
    let target = check_ratio(ratio, n)?;
    let density = SamplingDensity::radial(n, exponent)?;
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, ShearIndex::ZERO, None));
    let order = dedup_order(density.probabilities(), &mut rng, Some(target));
    Ok(SamplingMask {
        version: MASK_FORMAT_VERSION,
        library_version: crate::VERSION.to_string(),
        n,
        finest_scale: None,
        rho: DEFAULT_RHO,
        seed,
        scheme: MaskScheme::Radial,
        ratio_or_per_shear_m: MaskTarget::Ratio(ratio),
        density: DensityKind::RadialBaseline,
        exponent,
        draw_policy: DRAW_POLICY.to_string(),
        shears: vec![PointGroup {
            q: 0,
            level: 0,
            cone: None,
            points: to_points(&order, n),
        }],
    })
}

pub fn baseline_radial_mask(n: usize, ratio: f64, seed: u64) -> Result<SamplingMask> {
    baseline_radial_mask_with(n, ratio, seed, RADIAL_EXPONENT)
}

/// Keeps `U(n)` for `n ∈ Δ_J` and zeroes everything else.
pub fn mask_apply(u: &ComplexGrid, mask: &SamplingMask) -> Result<ComplexGrid> {
    let n = mask.size();
    if u.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            left: u.shape(),
            right: (n, n),
        });
    }
    let hit = mask.indicator();
    let data = u
        .data()
        .iter()
        .zip(&hit)
        .map(|(&v, &h)| if h { v } else { Default::default() })
        .collect();
    ComplexGrid::new(n, n, data)
}

/// Raw i.i.d. draws (with repeats) as storage indices, by CDF inversion.
pub fn raw_draws(density: &SamplingDensity, count: usize, seed: u64) -> Vec<usize> {
    let mut cdf = Vec::with_capacity(density.probabilities().len());
    let mut acc = 0.0;
    for &p in density.probabilities() {
        acc += p;
        cdf.push(acc);
    }
    let last = cdf.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, density.shear(), Some(density.cone())));
    (0..count)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            cdf.partition_point(|&c| c.partial_cmp(&u) != Some(Ordering::Greater))
                .min(last)
        })
        .collect()
}

/// Total-variation distance between the histogram of `draws` and the density.
pub fn total_variation(density: &SamplingDensity, draws: &[usize]) -> f64 {
    let probs = density.probabilities();
    let mut hist = vec![0usize; probs.len()];
    for &d in draws {
        hist[d] += 1;
    }
    let total = draws.len().max(1) as f64;
    0.5 * probs.iter().zip(&hist).map(|(&p, &h)| (h as f64 / total - p).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn deterministic_per_seed() {
        let a = draw_mask(2, 32, 40, 7).unwrap();
        let b = draw_mask(2, 32, 40, 7).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let c = draw_mask(2, 32, 40, 8).unwrap();
        assert_ne!(a.union_points(), c.union_points());
    }

    #[test]
    fn group_layout_and_counts() {
        let mask = draw_mask(2, 16, 20, 1).unwrap();
        assert_eq!(mask.groups().len(), 6);
        for g in mask.groups() {
            assert_eq!(g.points.len(), 20);
            assert!(g.points.windows(2).all(|w| w[0] < w[1]));
            assert!(g.points.iter().all(|p| (-8..8).contains(&p[0]) && (-8..8).contains(&p[1])));
        }
        assert!(mask.cardinality() <= 6 * 20);
        assert_eq!(mask.cardinality(), mask.union_points().len());
    }

    #[test]
    fn exhaustion_gives_full_grid() {
        for seed in [0, 99] {
            let mask = draw_mask(2, 8, 64, seed).unwrap();
            assert_eq!(mask.cardinality(), 64);
        }
        assert!(matches!(
            draw_mask(2, 8, 65, 0),
            Err(Error::TooManyPoints { requested: 65, available: 64 })
        ));
        assert!(draw_mask(2, 8, 0, 0).is_err());
    }

    #[test]
    fn ratio_targets_and_nesting() {
        let n = 64;
        let small = draw_mask_for_ratio(2, n, 0.05, 3).unwrap();
        let large = draw_mask_for_ratio(2, n, 0.2, 3).unwrap();
        assert!(small.cardinality() >= (0.05 * 4096.0) as usize);
        assert!(large.cardinality() >= (0.2 * 4096.0) as usize);
        let big = large.indicator();
        assert!(small.indicator().iter().zip(&big).all(|(&s, &b)| !s || b));
        let full = draw_mask_for_ratio(2, 16, 1.0, 3).unwrap();
        assert_eq!(full.cardinality(), 256);
        assert!(draw_mask_for_ratio(2, 16, 0.0, 3).is_err());
        assert!(draw_mask_for_ratio(2, 16, 1.5, 3).is_err());
    }

    #[test]
    fn mask_apply_projection() {
        let mask = draw_mask(2, 16, 10, 5).unwrap();
        let u = ComplexGrid::from_fn(16, 16, |i, j| Complex64::new((i * 3 + j) as f64 - 7.5, (i as f64).sin()));
        let once = mask_apply(&u, &mask).unwrap();
        let twice = mask_apply(&once, &mask).unwrap();
        assert_eq!(once, twice);
        let hit = mask.indicator();
        for (k, (&a, &b)) in u.data().iter().zip(once.data()).enumerate() {
            assert_eq!(b, if hit[k] { a } else { Complex64::new(0.0, 0.0) });
        }
        let full = draw_mask(2, 16, 256, 5).unwrap();
        assert_eq!(mask_apply(&u, &full).unwrap(), u);
        assert!(mask_apply(&ComplexGrid::zeros(8, 8), &mask).is_err());
    }

    #[test]
    fn empty_mask_zeroes() {
        let mut mask = draw_mask(2, 8, 3, 0).unwrap();
        mask.shears.clear();
        let u = ComplexGrid::from_fn(8, 8, |i, j| Complex64::new(1.0 + i as f64, j as f64));
        assert_eq!(mask_apply(&u, &mask).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn radial_baseline() {
        assert_eq!(baseline_radial_mask(16, 1.0, 4).unwrap().cardinality(), 256);
        let m = baseline_radial_mask(64, 0.05, 4).unwrap();
        assert_eq!(m.cardinality(), (0.05f64 * 4096.0).floor() as usize);
        assert_eq!(m.groups()[0].cone, None);
        assert_eq!(m, baseline_radial_mask(64, 0.05, 4).unwrap());
        assert!(baseline_radial_mask(64, 0.0, 4).is_err());
    }

    #[test]
    fn radial_baseline_at_512() {
        assert_eq!(baseline_radial_mask(512, 0.05, 0).unwrap().cardinality(), 13107);
    }

    #[test]
    fn raw_draws_match_density() {
        for s in [ShearIndex::ZERO, ShearIndex::new(1, 1).unwrap()] {
            let d = SamplingDensity::discrete(64, 2, s, Cone::Horizontal, 5.0).unwrap();
            let draws = raw_draws(&d, 100_000, 11);
            let tv = total_variation(&d, &draws);
            assert!(tv <= 0.02, "tv {tv} for s={s}");
        }
    }

    #[test]
    fn dedup_order_respects_weights() {
        // a point with overwhelming mass is drawn first almost surely
        let mut probs = vec![1e-6; 100];
        probs[37] = 1.0;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(dedup_order(&probs, &mut rng, Some(1)), vec![37]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let all = dedup_order(&probs, &mut rng, None);
        let mut sorted = all.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
    }

    #[test]
    fn concentrates_along_sheared_lines() {
        let n = 64usize;
        let s = ShearIndex::new(1, 1).unwrap();
        let stat = |p: &[i64; 2]| (p[1] as f64 - s.value() * p[0] as f64).abs() / (1.0 + (p[0] as f64).abs());
        let mean = |pts: &[[i64; 2]]| pts.iter().map(stat).sum::<f64>() / pts.len() as f64;
        let mask = draw_mask(2, n, 30, 21).unwrap();
        let group = |q: i64| {
            mask.groups()
                .iter()
                .find(|g| g.q == q && g.cone == Some(Cone::Horizontal))
                .unwrap()
        };
        let uniform: Vec<[i64; 2]> = (0..n * n).map(|i| [centered(i / n, n), centered(i % n, n)]).collect();
        let along = mean(&group(1).points);
        assert!(along < mean(&uniform), "{along} vs {}", mean(&uniform));
        assert!(along < mean(&group(-1).points));
    }

    #[test]
    fn json_round_trip_and_pgm() {
        let dir = tempfile::tempdir().unwrap();
        let mask = draw_mask(2, 16, 12, 2).unwrap();
        let path = dir.path().join("mask.json");
        mask.save(&path).unwrap();
        assert_eq!(SamplingMask::load(&path).unwrap(), mask);
        let pgm = std::fs::read(dir.path().join("mask.pgm")).unwrap();
        assert!(pgm.starts_with(b"P5\n16 16\n255\n"));
        let json: serde_json::Value = serde_json::from_str(&mask.to_json().unwrap()).unwrap();
        assert_eq!(json["draw_policy"], "iid-dedup");
        assert_eq!(json["ratio_or_per_shear_m"]["per_shear_m"], 12);
        assert_eq!(json["shears"][0]["cone"], "horizontal");
    }

    #[test]
    fn rejects_corrupt_manifest() {
        let mask = draw_mask(2, 8, 4, 2).unwrap();
        let mut json: serde_json::Value = serde_json::from_str(&mask.to_json().unwrap()).unwrap();
        json["shears"][0]["points"][0] = serde_json::json!([9, 0]);
        assert!(SamplingMask::from_json(&json.to_string()).is_err());
    }

    #[test]
    fn render_centers_dc() {
        let mut mask = draw_mask(2, 8, 1, 0).unwrap();
        mask.shears.truncate(1);
        mask.shears[0].points = vec![[0, 0]];
        let img = mask.render();
        assert_eq!(img.get(4, 4), 255.0);
        assert_eq!(img.data().iter().sum::<f64>(), 255.0);
    }

    #[test]
    fn theoretical_counts() {
        assert_eq!(theoretical_count(2, ShearIndex::ZERO, 0.05), 3);
        let m = draw_theory_mask(4, 0.05, 0).unwrap();
        assert_eq!(m.size(), 32);
        for g in m.groups() {
            assert_eq!(g.points.len(), theoretical_count(4, g.shear().unwrap(), 0.05));
        }
    }
}
