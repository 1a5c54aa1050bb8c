//! Equality-constrained ℓ1 minimization by Douglas–Rachford splitting.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::map::{norm, LinearMap};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Absolute bound on `‖Ax - y‖₂`; `None` means `1e-7 · ‖y‖₂`.
    pub residual_tolerance: Option<f64>,
    /// Bound on the iterate change relative to `max(1, ‖x‖₂)`.
    pub relative_tolerance: f64,
    /// Threshold of the ℓ1 proximal step; `None` uses `step_fraction` times
    /// the largest entry of the minimum-norm solution.
    pub step: Option<f64>,
    pub step_fraction: f64,
    /// Over-relaxation in `(0, 2)`.
    pub relaxation: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            residual_tolerance: None,
            relative_tolerance: 1e-9,
            step: None,
            step_fraction: 0.1,
            relaxation: 1.0,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(format!("solver option {what}")));
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        if !(self.relative_tolerance > 0.0) {
            return bad("relative_tolerance must be positive");
        }
        if matches!(self.residual_tolerance, Some(t) if !(t > 0.0)) {
            return bad("residual_tolerance must be positive");
        }
        if matches!(self.step, Some(t) if !(t > 0.0 && t.is_finite())) {
            return bad("step must be positive");
        }
        if !(self.step_fraction > 0.0 && self.step_fraction.is_finite()) {
            return bad("step_fraction must be positive");
        }
        if !(self.relaxation > 0.0 && self.relaxation < 2.0) {
            return bad("relaxation must lie in (0, 2)");
        }
        Ok(())
    }

    pub fn residual_bound(&self, y: &[Complex64]) -> f64 {
        self.residual_tolerance
            .unwrap_or_else(|| (1e-7 * norm(y)).max(1e-13))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub iterations: usize,
    pub residual: f64,
    pub objective: f64,
    pub converged: bool,
}

pub fn l1_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm()).sum()
}

fn soft_threshold(v: Complex64, t: f64) -> Complex64 {
    let m = v.norm();
    if m <= t {
        Complex64::new(0.0, 0.0)
    } else {
        v * ((m - t) / m)
    }
}

/// Orthogonal projection onto `{x : Ax = y}`.
fn project(a: &dyn LinearMap, y: &[Complex64], z: &[Complex64]) -> Vec<Complex64> {
    let r: Vec<Complex64> = a.apply(z).iter().zip(y).map(|(az, y)| az - y).collect();
    let corr = a.apply_adjoint(&a.solve_gram(&r));
    z.iter().zip(&corr).map(|(z, c)| z - c).collect()
}

fn residual(a: &dyn LinearMap, x: &[Complex64], y: &[Complex64]) -> f64 {
    let d: Vec<Complex64> = a.apply(x).iter().zip(y).map(|(ax, y)| ax - y).collect();
    norm(&d)
}

/// Approximately solves `min ‖x‖₁ subject to Ax = y`.
///
/// Iterates `x = P(z)`, `v = soft(2x - z, γ)`, `z += λ(v - x)` where `P` is the
/// projection onto the constraint set, and returns the feasible iterate `x`.
pub fn basis_pursuit(
    a: &dyn LinearMap,
    y: &[Complex64],
    opts: &SolverOptions,
) -> Result<(Vec<Complex64>, SolverReport)> {
    opts.validate()?;
    if y.len() != a.output_dim() {
        return Err(Error::InvalidDimensions(format!(
            "measurement vector has length {} but the operator produces {}",
            y.len(),
            a.output_dim()
        )));
    }
    if let Some(index) = y.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let res_bound = opts.residual_bound(y);
    let zero = vec![Complex64::new(0.0, 0.0); a.input_dim()];
    let mut z = project(a, y, &zero);
    let gamma = opts.step.unwrap_or_else(|| {
        let peak = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak > 0.0 {
            opts.step_fraction * peak
        } else {
            1.0
        }
    });
    let lambda = opts.relaxation;
    let mut x = z.clone();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iterations {
        iterations += 1;
        let next = project(a, y, &z);
        let mut gap = 0.0;
        for (zi, &xi) in z.iter_mut().zip(&next) {
            let v = soft_threshold(2.0 * xi - *zi, gamma);
            let d = v - xi;
            gap += d.norm_sqr();
            *zi += lambda * d;
        }
        let change: f64 = next
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        x = next;
        let scale = norm(&x).max(1.0);
        if change <= opts.relative_tolerance * scale && gap.sqrt() <= opts.relative_tolerance * scale {
            converged = residual(a, &x, y) <= res_bound;
            if converged {
                break;
            }
        }
    }
    let residual = residual(a, &x, y);
    let report = SolverReport {
        iterations,
        residual,
        objective: l1_norm(&x),
        converged: converged && residual <= res_bound,
    };
    if !report.converged {
        log::debug!(
            "basis pursuit stopped after {iterations} iterations without meeting tolerances"
        );
    }
    Ok((x, report))
}

#[cfg(test)]
mod tests {
    use super::super::DenseMatrix;
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_pins_solution() {
        let mut eye = vec![0.0; 16];
        (0..4).for_each(|i| eye[i * 5] = 1.0);
        let a = DenseMatrix::from_real_rows(4, 4, &eye).unwrap();
        let y = vec![c(1.0), c(-2.0), Complex64::new(0.5, 3.0), c(0.0)];
        let (x, report) = basis_pursuit(&a, &y, &SolverOptions::default()).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(report.converged);
    }

    #[test]
    fn single_row_sign_analysis() {
        let a = DenseMatrix::from_real_rows(1, 2, &[1.0, 0.5]).unwrap();
        let (x, report) = basis_pursuit(&a, &[c(1.0)], &SolverOptions::default()).unwrap();
        assert!((x[0] - c(1.0)).norm() < 1e-7, "{x:?}");
        assert!(x[1].norm() < 1e-7);
        assert!((report.objective - 1.0).abs() < 1e-7);
        assert!(report.converged);
    }

    #[test]
    fn report_matches_recomputed_residual() {
        let a = DenseMatrix::partial_dft(16, &[0, 2, 3, 7, 8, 13]).unwrap();
        let mut x0 = vec![c(0.0); 16];
        x0[4] = c(2.0);
        let y = a.apply(&x0);
        let (x, report) = basis_pursuit(&a, &y, &SolverOptions::default()).unwrap();
        assert!((residual(&a, &x, &y) - report.residual).abs() <= 1e-12);
    }

    #[test]
    fn unconverged_is_reported() {
        let a = DenseMatrix::partial_dft(32, &[1, 5, 6, 9, 17, 30]).unwrap();
        let mut x0 = vec![c(0.0); 32];
        x0[3] = c(1.0);
        x0[20] = c(-1.0);
        let opts = SolverOptions {
            max_iterations: 2,
            ..Default::default()
        };
        let (_, report) = basis_pursuit(&a, &a.apply(&x0), &opts).unwrap();
        assert_eq!(report.iterations, 2);
        assert!(!report.converged);
    }

    #[test]
    fn rejects_bad_input() {
        let a = DenseMatrix::from_real_rows(1, 2, &[1.0, 0.5]).unwrap();
        assert!(basis_pursuit(&a, &[c(1.0), c(2.0)], &SolverOptions::default()).is_err());
        let bad = SolverOptions {
            relaxation: 2.5,
            ..Default::default()
        };
        assert!(basis_pursuit(&a, &[c(1.0)], &bad).is_err());
        let zero_iter = SolverOptions {
            max_iterations: 0,
            ..Default::default()
        };
        assert!(zero_iter.validate().is_err());
    }

    #[test]
    fn zero_measurements_give_zero() {
        let a = DenseMatrix::partial_dft(8, &[1, 2, 3]).unwrap();
        let (x, report) = basis_pursuit(&a, &[c(0.0); 3], &SolverOptions::default()).unwrap();
        assert!(x.iter().all(|v| v.norm() == 0.0));
        assert!(report.converged);
    }

    #[test]
    fn report_json_fields() {
        let r = SolverReport {
            iterations: 3,
            residual: 0.5,
            objective: 2.0,
            converged: true,
        };
        let v: serde_json::Value = serde_json::to_value(r).unwrap();
        assert_eq!(v["iterations"], 3);
        assert_eq!(v["converged"], true);
    }
}
