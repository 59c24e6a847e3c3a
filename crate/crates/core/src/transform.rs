//! The fractional transformation matrix
//! `W_{k,l} = (1/2) ∫ C_l(x) exp(i x^2 cot / 2) exp(-i k pi x) dx`
//! and the matrix of the direct Gegenbauer projection.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frft::{chirp, cot_alpha, default_quad_order, wave};
use crate::gegenbauer::GegenbauerBasis;
use crate::numerics::{complex_erf, faddeeva, gauss_legendre, QuadratureRule};

/// Below this `|cot alpha|` the closed-form classical columns are used.
pub const CLASSICAL_COT_THRESHOLD: f64 = 1e-8;

fn check_open_angle(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < FRAC_PI_2) {
        return Err(Error::AngleOutOfRange(alpha));
    }
    Ok(cot_alpha(alpha))
}

fn check_angle(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= FRAC_PI_2) {
        return Err(Error::AngleOutOfRange(alpha));
    }
    Ok(cot_alpha(alpha))
}

/// `W_{k,0}` in closed form through the complex error function,
/// `0 < alpha < pi/2`.
pub fn w_k0(alpha: f64, k: i64) -> Result<Complex64> {
    let c = check_open_angle(alpha)?;
    Ok(w_k0_cot(c, k))
}

fn w_k0_cot(c: f64, k: i64) -> Complex64 {
    let sqrt_c = c.sqrt();
    let prefactor = Complex64::new(1.0, 1.0) * (PI.sqrt() / (4.0 * sqrt_c));
    let beta = Complex64::new(1.0, -1.0) * (0.5 * sqrt_c);
    let big_k = k as f64 * PI / c;
    let (u1, u2) = (1.0 - big_k, -1.0 - big_k);
    if big_k.abs() > 1.0 {
        // Both erf arguments lie on the same side; writing erf through the
        // Faddeeva function cancels the exp(-i K^2 c / 2) phase analytically.
        let s = u1.signum();
        let i = Complex64::i();
        let w1 = faddeeva(i * s * beta * u1);
        let w2 = faddeeva(i * s * beta * u2);
        let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
        prefactor * Complex64::cis(0.5 * c) * (s * parity) * (w2 - w1)
    } else {
        let phase = Complex64::cis(-0.5 * big_k * big_k * c);
        prefactor * phase * (complex_erf(beta * u1) - complex_erf(beta * u2))
    }
}

/// `W_{k,0}` without chirp: 1 for `k = 0`, else 0.
pub fn w_k0_classical(k: i64) -> Complex64 {
    if k == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// `W_{k,1} = (2 lambda k pi / cot alpha) W_{k,0}`, `0 < alpha < pi/2`.
pub fn w_k1(alpha: f64, lambda: f64, k: i64) -> Result<Complex64> {
    let c = check_open_angle(alpha)?;
    if lambda == 0.0 {
        return Err(Error::InvalidLambda(lambda));
    }
    Ok(w_k1_cot(c, lambda, k))
}

fn w_k1_cot(c: f64, lambda: f64, k: i64) -> Complex64 {
    w_k0_cot(c, k) * (2.0 * lambda * k as f64 * PI / c)
}

/// `W_{k,1}` without chirp: `lambda ∫ x exp(-i k pi x) dx`.
pub fn w_k1_classical(lambda: f64, k: i64) -> Complex64 {
    if k == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
    Complex64::new(0.0, 2.0 * lambda * parity / (k as f64 * PI))
}

/// `W_{k,l}` by the given Gauss-Legendre rule.
pub fn w_kl_quadrature(
    alpha: f64,
    basis: &GegenbauerBasis,
    k: i64,
    l: usize,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    let c = check_angle(alpha)?;
    if l > basis.max_degree() {
        return Err(Error::DegreeOutOfRange { degree: l, max: basis.max_degree() });
    }
    let min = default_quad_order(k.unsigned_abs() as usize);
    if rule.order() < min {
        return Err(Error::QuadratureOrder { got: rule.order(), min });
    }
    let sum: Complex64 = rule
        .iter()
        .map(|(x, w)| chirp(c, x) * wave(-k, x) * (w * basis.eval(l, x).unwrap_or(0.0)))
        .sum();
    Ok(sum * 0.5)
}

/// Provenance shared by the assembled matrices.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MatrixParams {
    pub alpha: f64,
    pub lambda: f64,
    pub big_n: usize,
    pub m: usize,
    pub quad_order: usize,
}

/// `(2N + 1) x (m + 1)` matrix `W_alpha`; row `k + N`, column `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformMatrix {
    pub entries: DMatrix<Complex64>,
    pub params: MatrixParams,
}

/// Direct-projection matrix `D_{k,l} = (1/h_l) ∫ w(x) phi_k(x) C_l(x) dx`, so
/// that `g_l = sum_k c_k D_{k,l}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectMatrix {
    pub entries: DMatrix<Complex64>,
    pub params: MatrixParams,
}

fn check_shape(alpha: f64, basis: &GegenbauerBasis, big_n: usize, rule: &QuadratureRule, min: usize) -> Result<f64> {
    let c = check_angle(alpha)?;
    if big_n == 0 {
        return Err(Error::ZeroModes);
    }
    let m = basis.max_degree();
    if m > 2 * big_n {
        return Err(Error::DegreeExceedsModes { m, big_n });
    }
    if rule.order() < min {
        return Err(Error::QuadratureOrder { got: rule.order(), min });
    }
    Ok(c)
}

/// Rows `sum_q v_q(k) exp(-i k pi x_q) C_l(x_q)` for every `k` in `-N..=N`,
/// with `v_q` already carrying weight and chirp.
fn quadrature_rows(
    big_n: usize,
    m: usize,
    nodes: &[f64],
    values: &[Complex64],
    cols: &[Vec<f64>],
    conj_wave: bool,
) -> Vec<Vec<Complex64>> {
    let n = big_n as i64;
    (-n..=n)
        .into_par_iter()
        .map(|k| {
            let kk = if conj_wave { -k } else { k };
            let mut row = vec![Complex64::new(0.0, 0.0); m + 1];
            for (q, (&x, &v)) in nodes.iter().zip(values).enumerate() {
                let e = wave(kk, x) * v;
                for (l, r) in row.iter_mut().enumerate() {
                    *r += e * cols[q][l];
                }
            }
            row
        })
        .collect()
}

/// Assembles `W_alpha`. Columns 0 and 1 use the closed forms (classical ones
/// when `|cot alpha| < 1e-8`); higher columns use `rule`, which must have at
/// least `max(400, 6N)` points.
pub fn assemble(alpha: f64, basis: &GegenbauerBasis, big_n: usize, rule: &QuadratureRule) -> Result<TransformMatrix> {
    let c = check_shape(alpha, basis, big_n, rule, default_quad_order(big_n))?;
    let m = basis.max_degree();
    let lambda = basis.lambda();
    let nodes = rule.nodes();
    let values: Vec<Complex64> = rule.iter().map(|(x, w)| chirp(c, x) * (0.5 * w)).collect();
    let cols: Vec<Vec<f64>> = nodes.iter().map(|&x| basis.eval_all(x)).collect();
    let rows = quadrature_rows(big_n, m, nodes, &values, &cols, true);

    let classical = c.abs() < CLASSICAL_COT_THRESHOLD;
    let n = big_n as i64;
    let mut entries = DMatrix::<Complex64>::zeros(2 * big_n + 1, m + 1);
    for (i, k) in (-n..=n).enumerate() {
        for l in 0..=m {
            entries[(i, l)] = match (l, classical) {
                (0, true) => w_k0_classical(k),
                (0, false) => w_k0_cot(c, k),
                (1, true) => w_k1_classical(lambda, k),
                (1, false) => w_k1_cot(c, lambda, k),
                _ => rows[i][l],
            };
        }
    }
    Ok(TransformMatrix {
        entries,
        params: MatrixParams { alpha, lambda, big_n, m, quad_order: rule.order() },
    })
}

/// [`assemble`] with the default `max(400, 6N)`-point rule.
pub fn assemble_default(alpha: f64, basis: &GegenbauerBasis, big_n: usize) -> Result<TransformMatrix> {
    let rule = gauss_legendre(default_quad_order(big_n))?;
    assemble(alpha, basis, big_n, &rule)
}

/// Direct-method quadrature order: twice the transform default, since the
/// Gegenbauer weight is folded into a plain Gauss-Legendre integrand.
pub fn default_direct_quad_order(big_n: usize) -> usize {
    2 * default_quad_order(big_n)
}

/// Assembles the direct-method matrix; `rule` needs at least
/// `2 max(400, 6N)` points.
pub fn assemble_direct(
    alpha: f64,
    basis: &GegenbauerBasis,
    big_n: usize,
    rule: &QuadratureRule,
) -> Result<DirectMatrix> {
    let c = check_shape(alpha, basis, big_n, rule, default_direct_quad_order(big_n))?;
    let m = basis.max_degree();
    let h: Vec<f64> = (0..=m).map(|l| basis.h_constant(l)).collect::<Result<_>>()?;
    let nodes = rule.nodes();
    let values: Vec<Complex64> = rule.iter().map(|(x, w)| chirp(c, x).conj() * (w * basis.weight(x))).collect();
    let cols: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&x| basis.eval_all(x).iter().zip(&h).map(|(v, h)| v / h).collect())
        .collect();
    let rows = quadrature_rows(big_n, m, nodes, &values, &cols, false);
    let entries = DMatrix::from_fn(2 * big_n + 1, m + 1, |i, l| rows[i][l]);
    Ok(DirectMatrix {
        entries,
        params: MatrixParams { alpha, lambda: basis.lambda(), big_n, m, quad_order: rule.order() },
    })
}

/// [`assemble_direct`] with the default doubled rule.
pub fn assemble_direct_default(alpha: f64, basis: &GegenbauerBasis, big_n: usize) -> Result<DirectMatrix> {
    let rule = gauss_legendre(default_direct_quad_order(big_n))?;
    assemble_direct(alpha, basis, big_n, &rule)
}
