use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shearsense::l1::{basis_pursuit, brute_force_bp, l1_norm, DenseMatrix, LinearMap, SolverOptions};

struct Instance {
    a: DenseMatrix,
    x: Vec<Complex64>,
    y: Vec<Complex64>,
}

fn planted(rows: usize, cols: usize, k: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, cols, rows).into_vec();
    picked.sort_unstable();
    let a = DenseMatrix::partial_dft(cols, &picked).unwrap();
    let mut x = vec![Complex64::new(0.0, 0.0); cols];
    for j in sample(&mut rng, cols, k) {
        let mag = rng.random_range(0.5..1.5);
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        x[j] = Complex64::from_polar(mag, phase);
    }
    let y = a.apply(&x);
    Instance { a, x, y }
}

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn matches_oracle_on_partial_dft() {
    for seed in 0..20 {
        let inst = planted(12, 24, 1 + (seed as usize % 2), seed);
        let oracle = brute_force_bp(&inst.a, &inst.y, 4).unwrap().expect("planted support is feasible");
        let (x, report) = basis_pursuit(&inst.a, &inst.y, &SolverOptions::default()).unwrap();
        let err = dist(&x, &oracle);
        assert!(err <= 1e-5, "seed {seed}: {err:e} ({report:?})");
    }
}

#[test]
fn recovers_three_sparse_signals() {
    let mut ok = 0;
    for seed in 0..20 {
        let inst = planted(32, 128, 3, 1000 + seed);
        let (x, _) = basis_pursuit(&inst.a, &inst.y, &SolverOptions::default()).unwrap();
        if dist(&x, &inst.x) <= 1e-6 {
            ok += 1;
        }
    }
    assert!(ok >= 18, "{ok} of 20");
}

#[test]
fn objective_beats_least_squares() {
    for seed in 0..10 {
        let inst = planted(12, 24, 2, 500 + seed);
        let ls = inst.a.apply_adjoint(&inst.a.solve_gram(&inst.y));
        let (x, report) = basis_pursuit(&inst.a, &inst.y, &SolverOptions::default()).unwrap();
        assert!(report.objective <= l1_norm(&ls) + 1e-9);
        let recomputed = dist(&inst.a.apply(&x), &inst.y);
        assert!((recomputed - report.residual).abs() <= 1e-12);
    }
}
