use shearsense::phantoms::{render, PhantomKind, PhantomSpec};
use shearsense::spectral::RealGrid;

fn downsample(fine: &RealGrid) -> RealGrid {
    let n = fine.rows() / 2;
    RealGrid::from_fn(n, n, |i, j| {
        0.25 * (fine.get(2 * i, 2 * j)
            + fine.get(2 * i + 1, 2 * j)
            + fine.get(2 * i, 2 * j + 1)
            + fine.get(2 * i + 1, 2 * j + 1))
    })
}

#[test]
fn downsampled_render_is_consistent() {
    for kind in [PhantomKind::Disk, PhantomKind::Ellipse, PhantomKind::TwoRegionSmooth] {
        for n in [32usize, 64, 128, 256] {
            let coarse = render(&PhantomSpec::preset(kind, n)).unwrap();
            let fine = render(&PhantomSpec::preset(kind, 2 * n)).unwrap();
            let d = downsample(&fine);
            // squared L2 distance with pixel area 1/N^2; the unsquared norm of a
            // rasterized jump only decays like N^(-1/2)
            let sq = coarse.data().iter().zip(d.data()).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
                / (n * n) as f64;
            assert!(sq <= 2.0 / n as f64, "{kind:?} at {n}: {sq}");
        }
    }
}

#[test]
fn rendering_is_deterministic() {
    let spec = PhantomSpec::two_region_smooth(128);
    let a = render(&spec).unwrap();
    let b = render(&spec).unwrap();
    assert!(a.data().iter().zip(b.data()).all(|(x, y)| x.to_bits() == y.to_bits()));
}
