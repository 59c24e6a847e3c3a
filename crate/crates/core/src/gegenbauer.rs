//! Gegenbauer polynomials `C_l^lambda`, their normalization constants, the
//! unweighted Gram matrix and the error-bound factors `Psi_m`, `Phi_m`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;

/// Gegenbauer family with parameter `lambda > -1/2`, `lambda != 0`, truncated
/// at degree `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GegenbauerBasis {
    lambda: f64,
    max_degree: usize,
}

impl GegenbauerBasis {
    pub fn new(lambda: f64, max_degree: usize) -> Result<Self> {
        if !lambda.is_finite() || lambda <= -0.5 || lambda == 0.0 {
            return Err(Error::InvalidLambda(lambda));
        }
        Ok(Self { lambda, max_degree })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    fn check_degree(&self, l: usize) -> Result<()> {
        if l > self.max_degree {
            return Err(Error::DegreeOutOfRange { degree: l, max: self.max_degree });
        }
        Ok(())
    }

    fn require_positive(&self) -> Result<()> {
        if self.lambda <= 0.0 {
            return Err(Error::NonPositiveLambda(self.lambda));
        }
        Ok(())
    }

    /// `C_l(x)` by upward recurrence.
    pub fn eval(&self, l: usize, x: f64) -> Result<f64> {
        self.check_degree(l)?;
        Ok(recurrence(self.lambda, l, x, |_, _| {}))
    }

    /// `[C_0(x), ..., C_m(x)]`.
    pub fn eval_all(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.max_degree + 1];
        self.eval_all_into(x, &mut out);
        out
    }

    /// Writes `C_0(x) .. C_{out.len()-1}(x)` into `out`.
    pub fn eval_all_into(&self, x: f64, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        recurrence(self.lambda, out.len() - 1, x, |l, v| out[l] = v);
    }

    /// `sum_l coeffs[l] C_l(x)`, for real or complex coefficients.
    pub fn eval_series<T>(&self, coeffs: &[T], x: f64) -> T
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::iter::Sum<T>,
    {
        let mut c = vec![0.0; coeffs.len()];
        self.eval_all_into(x, &mut c);
        coeffs.iter().zip(&c).map(|(&g, &v)| g * v).sum()
    }

    /// `C_l(1) = Gamma(l + 2 lambda) / (l! Gamma(2 lambda))` as a running product.
    pub fn boundary_value(&self, l: usize) -> Result<f64> {
        self.check_degree(l)?;
        Ok(boundary_product(self.lambda, l))
    }

    /// `h_l = ∫ (1 - x^2)^(lambda - 1/2) C_l(x)^2 dx`.
    pub fn h_constant(&self, l: usize) -> Result<f64> {
        self.check_degree(l)?;
        self.require_positive()?;
        Ok(h_value(self.lambda, l))
    }

    /// `h_{l+1} / h_l = (l + 2 lambda)(l + lambda) / ((l + 1)(l + 1 + lambda))`.
    pub fn h_ratio(&self, l: usize) -> f64 {
        let (lf, lam) = (l as f64, self.lambda);
        (lf + 2.0 * lam) * (lf + lam) / ((lf + 1.0) * (lf + 1.0 + lam))
    }

    /// `(1 - x^2)^(lambda - 1/2)`.
    pub fn weight(&self, x: f64) -> f64 {
        (1.0 - x * x).powf(self.lambda - 0.5)
    }

    /// `min_l h_l`, the lower bound on the smallest Gram eigenvalue. Only
    /// meaningful for `lambda >= 1/2`.
    pub fn gram_eigenvalue_lower_bound(&self) -> Result<f64> {
        if self.lambda < 0.5 {
            return Err(Error::LambdaBelowHalf(self.lambda));
        }
        Ok((0..=self.max_degree)
            .map(|l| h_value(self.lambda, l))
            .fold(f64::INFINITY, f64::min))
    }
}

fn recurrence(lambda: f64, l: usize, x: f64, mut sink: impl FnMut(usize, f64)) -> f64 {
    let mut prev = 1.0;
    sink(0, prev);
    if l == 0 {
        return prev;
    }
    let mut cur = 2.0 * lambda * x;
    sink(1, cur);
    for j in 1..l {
        let jf = j as f64;
        let next = (2.0 * (jf + lambda) * x * cur - (jf + 2.0 * lambda - 1.0) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
        sink(j + 1, cur);
    }
    cur
}

fn boundary_product(lambda: f64, l: usize) -> f64 {
    (0..l).map(|j| (j as f64 + 2.0 * lambda) / (j as f64 + 1.0)).product()
}

fn h_value(lambda: f64, l: usize) -> f64 {
    let gamma_ratio = (libm::lgamma(lambda + 0.5) - libm::lgamma(lambda)).exp();
    std::f64::consts::PI.sqrt() * boundary_product(lambda, l) * gamma_ratio / (l as f64 + lambda)
}

/// Unweighted Gram matrix `Gr_{l,j} = ∫ C_l C_j dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: DMatrix<f64>,
    pub lambda: f64,
    pub m: usize,
}

/// Gram matrix by an `(m + 16)`-point Gauss-Legendre rule, exact for the
/// degree-`2m` integrands.
pub fn gram_matrix(basis: &GegenbauerBasis) -> GramMatrix {
    let m = basis.max_degree;
    let rule = gauss_legendre(m + 16).expect("order is positive");
    let mut g = DMatrix::<f64>::zeros(m + 1, m + 1);
    let mut c = vec![0.0; m + 1];
    for (x, w) in rule.iter() {
        basis.eval_all_into(x, &mut c);
        for l in 0..=m {
            for j in l..=m {
                g[(l, j)] += w * c[l] * c[j];
            }
        }
    }
    for l in 0..=m {
        for j in 0..l {
            g[(l, j)] = g[(j, l)];
        }
    }
    GramMatrix { entries: g, lambda: basis.lambda, m }
}

/// The two sums entering the exponential error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorBoundDiagnostics {
    /// `sum_{l<=m} C_l(1)^2 / h_l`
    pub psi_m: f64,
    /// `(sum_{l<=m} C_l(1)^2)^(1/2)`
    pub phi_m: f64,
}

pub fn diagnostics(basis: &GegenbauerBasis) -> Result<ErrorBoundDiagnostics> {
    basis.require_positive()?;
    let mut psi = 0.0;
    let mut phi2 = 0.0;
    for l in 0..=basis.max_degree {
        let b = boundary_product(basis.lambda, l);
        psi += b * b / h_value(basis.lambda, l);
        phi2 += b * b;
    }
    Ok(ErrorBoundDiagnostics { psi_m: psi, phi_m: phi2.sqrt() })
}
