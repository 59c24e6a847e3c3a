//! Dense complex least squares, singular values and condition reports.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::transform::TransformMatrix;

/// Relative singular-value gap below which a matrix counts as rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-14;

/// Householder QR of a tall complex matrix, reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    q: DMatrix<Complex64>,
    r: DMatrix<Complex64>,
}

impl LeastSquares {
    pub fn new(a: &DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = a.shape();
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if rows < cols {
            return Err(Error::DimensionMismatch(format!(
                "least squares needs rows >= cols, got {rows}x{cols}"
            )));
        }
        let qr = a.clone().qr();
        let (q, r) = (qr.q(), qr.r());
        // R shares the singular values of A
        let sv = sorted_singular_values(&r);
        let ratio = sv[sv.len() - 1] / sv[0];
        if !(ratio >= RANK_TOLERANCE) {
            return Err(Error::RankDeficient { ratio: if ratio.is_nan() { 0.0 } else { ratio } });
        }
        Ok(Self { q, r })
    }

    pub fn solve(&self, b: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if b.len() != self.q.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.q.nrows()
            )));
        }
        let qtb = self.q.adjoint() * b;
        self.r
            .solve_upper_triangular(&qtb)
            .ok_or(Error::RankDeficient { ratio: 0.0 })
    }
}

/// `argmin_x ||A x - b||_2` via Householder QR.
pub fn lstsq(a: &DMatrix<Complex64>, b: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    if a.nrows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, right-hand side has length {}",
            a.nrows(),
            b.len()
        )));
    }
    LeastSquares::new(a)?.solve(b)
}

fn sorted_singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Singular values in descending order.
pub fn singular_values(a: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if a.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    Ok(sorted_singular_values(a))
}

/// Eigenvalues of a real symmetric matrix in descending order.
pub fn symmetric_eigenvalues(g: &DMatrix<f64>) -> Result<Vec<f64>> {
    if g.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    if !g.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", g.nrows(), g.ncols())));
    }
    let asym = (g - g.transpose()).amax();
    if asym > 1e-12 * g.amax().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let mut ev: Vec<f64> = g.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

/// Extreme singular values and their ratio for one transformation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionReport {
    pub sigma_max: f64,
    pub sigma_min: f64,
    pub kappa: f64,
    pub m: usize,
    pub big_n: usize,
    pub alpha: f64,
    pub lambda: f64,
}

pub fn condition_report(w: &TransformMatrix) -> Result<ConditionReport> {
    let sv = singular_values(&w.entries)?;
    let (sigma_max, sigma_min) = (sv[0], sv[sv.len() - 1]);
    let ratio = sigma_min / sigma_max;
    if !(ratio >= RANK_TOLERANCE) {
        return Err(Error::RankDeficient { ratio: if ratio.is_nan() { 0.0 } else { ratio } });
    }
    let p = w.params;
    Ok(ConditionReport {
        sigma_max,
        sigma_min,
        kappa: sigma_max / sigma_min,
        m: p.m,
        big_n: p.big_n,
        alpha: p.alpha,
        lambda: p.lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gegenbauer::{gram_matrix, GegenbauerBasis};
    use crate::transform::assemble_default;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> DMatrix<Complex64> {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        DMatrix::from_fn(rows, cols, |_, _| c(next(), next()))
    }

    #[test]
    fn identity_solve() {
        let a = DMatrix::<Complex64>::identity(4, 4);
        let b = DVector::from_vec(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 0.0), c(7.0, -1.0)]);
        let x = lstsq(&a, &b).unwrap();
        assert!((x - b).norm() < 1e-15);
    }

    #[test]
    fn mean_of_two() {
        let a = DMatrix::from_vec(2, 1, vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let b = DVector::from_vec(vec![c(0.0, 0.0), c(2.0, 0.0)]);
        let x = lstsq(&a, &b).unwrap();
        assert!((x[0] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn planted_solution_recovered() {
        let a = random_matrix(50, 10, 7);
        let plant = DVector::from_fn(10, |i, _| c(i as f64 - 4.5, 0.3 * i as f64));
        let b = &a * &plant;
        let x = lstsq(&a, &b).unwrap();
        assert!((x - &plant).norm() <= 1e-11 * plant.norm());
    }

    #[test]
    fn residual_orthogonal_to_range() {
        let a = random_matrix(40, 12, 3);
        let b = DVector::from_fn(40, |i, _| c((i as f64).sin(), (i as f64).cos()));
        let x = lstsq(&a, &b).unwrap();
        let r = &a * &x - &b;
        assert!((a.adjoint() * r).norm() <= 1e-10 * a.norm() * b.norm());
    }

    #[test]
    fn dimension_and_rank_errors() {
        let a = random_matrix(5, 3, 1);
        let b = DVector::from_element(4, c(1.0, 0.0));
        assert!(matches!(lstsq(&a, &b), Err(Error::DimensionMismatch(_))));
        let wide = random_matrix(2, 3, 1);
        assert!(matches!(lstsq(&wide, &DVector::from_element(2, c(1.0, 0.0))), Err(Error::DimensionMismatch(_))));
        let mut deficient = random_matrix(6, 3, 2);
        for i in 0..6 {
            deficient[(i, 2)] = deficient[(i, 0)] * 2.0;
        }
        assert!(matches!(
            lstsq(&deficient, &DVector::from_element(6, c(1.0, 0.0))),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn well_conditioned_systems_backward_stable() {
        for seed in 0..100 {
            let a = random_matrix(30, 8, seed);
            let sv = singular_values(&a).unwrap();
            assert!(sv[0] / sv[sv.len() - 1] <= 1e3);
            let plant = DVector::from_fn(8, |i, _| c(1.0 + i as f64, -(seed as f64)));
            let x = lstsq(&a, &(&a * &plant)).unwrap();
            assert!((x - &plant).norm() <= 1e-9 * plant.norm());
        }
    }

    #[test]
    fn singular_value_examples() {
        let d = DMatrix::from_row_slice(2, 2, &[c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let sv = singular_values(&d).unwrap();
        assert!((sv[0] - 3.0).abs() < 1e-15 && (sv[1] - 1.0).abs() < 1e-15);
        // orthonormal columns
        let q = random_matrix(20, 5, 11).qr().q();
        for s in singular_values(&q).unwrap() {
            assert!((s - 1.0).abs() < 1e-12);
        }
        assert!(matches!(singular_values(&DMatrix::<Complex64>::zeros(0, 0)), Err(Error::EmptyMatrix)));
    }

    #[test]
    fn singular_values_frobenius_and_adjoint() {
        let a = random_matrix(25, 9, 5);
        let sv = singular_values(&a).unwrap();
        assert!(sv.windows(2).all(|p| p[0] >= p[1]) && sv.iter().all(|&s| s >= 0.0));
        let sum_sq: f64 = sv.iter().map(|s| s * s).sum();
        assert!((sum_sq - a.norm_squared()).abs() <= 1e-10 * a.norm_squared());
        let sva = singular_values(&a.adjoint()).unwrap();
        for (x, y) in sv.iter().zip(&sva) {
            assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 5.0]);
        assert_eq!(symmetric_eigenvalues(&g).unwrap(), vec![5.0, 2.0]);
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(symmetric_eigenvalues(&bad), Err(Error::NotSymmetric(_))));

        let gr = gram_matrix(&GegenbauerBasis::new(1.0, 4).unwrap());
        let ev = symmetric_eigenvalues(&gr.entries).unwrap();
        assert!(*ev.last().unwrap() >= FRAC_PI_2 - 1e-9);
        let trace: f64 = ev.iter().sum();
        assert!((trace - gr.entries.trace()).abs() <= 1e-10);
        // trace equals the sum of squared L2 norms, by an independent rule
        let b = GegenbauerBasis::new(1.0, 4).unwrap();
        let rule = crate::numerics::gauss_legendre(50).unwrap();
        let norms: f64 = (0..=4).map(|l| rule.integrate(|x| b.eval(l, x).unwrap().powi(2))).sum();
        assert!((trace - norms).abs() <= 1e-10);
    }

    #[test]
    fn condition_report_examples() {
        let b = GegenbauerBasis::new(0.75, 0).unwrap();
        let w = assemble_default(FRAC_PI_2, &b, 1).unwrap();
        let r = condition_report(&w).unwrap();
        assert!((r.sigma_max - 1.0).abs() < 1e-15 && (r.sigma_min - 1.0).abs() < 1e-15);
        assert!((r.kappa - 1.0).abs() < 1e-15);

        let b = GegenbauerBasis::new(0.75, 16).unwrap();
        let k1 = condition_report(&assemble_default(PI / 8.0, &b, 160).unwrap()).unwrap().kappa;
        let k2 = condition_report(&assemble_default(3.0 * PI / 8.0, &b, 160).unwrap()).unwrap().kappa;
        assert!((k1 / k2 - 1.0).abs() <= 0.02);

        let kappa = |m: usize| {
            let b = GegenbauerBasis::new(0.5, m).unwrap();
            condition_report(&assemble_default(FRAC_PI_4, &b, 10 * m).unwrap()).unwrap().kappa
        };
        assert!(kappa(24) > kappa(8));
    }

    #[test]
    fn sandwich_bounds_hold() {
        for lambda in [0.75, 1.0] {
            for m in [4, 8, 16] {
                let b = GegenbauerBasis::new(lambda, m).unwrap();
                let w = assemble_default(FRAC_PI_4, &b, 10 * m).unwrap();
                let gr = gram_matrix(&b).entries;
                let ev = symmetric_eigenvalues(&gr).unwrap();
                let wtw = (w.entries.adjoint() * &w.entries).map(|v| v.re);
                let tail = singular_values(&(&gr - wtw * 2.0).map(|v| c(v, 0.0))).unwrap()[0];
                let sv = singular_values(&w.entries).unwrap();
                let (smax, smin) = (sv[0], sv[sv.len() - 1]);
                assert!(0.5 * (ev[ev.len() - 1] - tail) <= smin * smin + 1e-12);
                assert!(smax * smax <= 0.5 * ev[0] + 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn planted_solutions(seed in 0u64..10_000, rows in 10usize..40, cols in 1usize..10) {
            let a = random_matrix(rows, cols, seed);
            let sv = singular_values(&a).unwrap();
            prop_assume!(sv[0] / sv[sv.len() - 1] < 1e6);
            let plant = DVector::from_fn(cols, |i, _| c(i as f64, 1.0));
            let x = lstsq(&a, &(&a * &plant)).unwrap();
            prop_assert!((x - &plant).norm() <= 1e-9 * plant.norm().max(1.0));
        }
    }
}
