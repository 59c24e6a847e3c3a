//! Fractional Fourier series on `[-1, 1]`: basis functions, coefficients and
//! partial sums.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, QuadratureRule};

/// Transform angle and truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrftConfig {
    alpha: f64,
    big_n: usize,
}

impl FrftConfig {
    /// `0 < alpha <= pi/2`; `alpha = pi/2` is the classical Fourier series.
    pub fn new(alpha: f64, big_n: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= FRAC_PI_2) {
            return Err(Error::AngleOutOfRange(alpha));
        }
        if big_n == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(Self { alpha, big_n })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn cot(&self) -> f64 {
        cot_alpha(self.alpha)
    }

    /// Default coefficient quadrature order `max(400, 6N)`.
    pub fn default_quad_order(&self) -> usize {
        default_quad_order(self.big_n)
    }

    /// Smallest admissible coefficient quadrature order, `2(N + 2)`.
    pub fn min_quad_order(&self) -> usize {
        2 * (self.big_n + 2)
    }

    fn check_k(&self, k: i64) -> Result<()> {
        if k.unsigned_abs() as usize > self.big_n {
            return Err(Error::WaveIndexOutOfRange { k, big_n: self.big_n });
        }
        Ok(())
    }

    /// Wave numbers `-N..=N`.
    pub fn wave_numbers(&self) -> impl Iterator<Item = i64> + Clone {
        let n = self.big_n as i64;
        -n..=n
    }
}

/// `cot(alpha)`, exactly zero at `alpha = pi/2`.
pub fn cot_alpha(alpha: f64) -> f64 {
    if alpha == FRAC_PI_2 {
        0.0
    } else {
        1.0 / alpha.tan()
    }
}

pub fn default_quad_order(big_n: usize) -> usize {
    400.max(6 * big_n)
}

/// `exp(i x^2 cot / 2)`.
pub(crate) fn chirp(cot: f64, x: f64) -> Complex64 {
    Complex64::cis(0.5 * x * x * cot)
}

/// `exp(i k pi x)`.
pub(crate) fn wave(k: i64, x: f64) -> Complex64 {
    // reduce k x modulo 2 before scaling by pi to keep the phase accurate
    Complex64::cis(PI * (k as f64 * x).rem_euclid(2.0))
}

/// `phi_k(x) = exp(-i x^2 cot / 2) exp(i k pi x)`.
pub fn basis_eval(config: &FrftConfig, k: i64, x: f64) -> Result<Complex64> {
    config.check_k(k)?;
    Ok(chirp(config.cot(), x).conj() * wave(k, x))
}

/// Coefficients `c_k = <f, phi_k>`, `k = -N..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrftSpectrum {
    pub config: FrftConfig,
    coeffs: Vec<Complex64>,
}

impl FrftSpectrum {
    pub fn new(config: FrftConfig, coeffs: Vec<Complex64>) -> Result<Self> {
        let expected = 2 * config.big_n + 1;
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "spectrum needs {expected} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self { config, coeffs })
    }

    /// Coefficients ordered `k = -N..=N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Result<Complex64> {
        self.config.check_k(k)?;
        Ok(self.coeffs[(k + self.config.big_n as i64) as usize])
    }
}

/// `c_k = (1/2) sum_q w_q f(x_q) conj(phi_k(x_q))` on a rule of the given order.
pub fn compute_spectrum<F>(config: &FrftConfig, f: F, quad_order: usize) -> Result<FrftSpectrum>
where
    F: Fn(f64) -> f64,
{
    compute_spectrum_complex(config, |x| Complex64::new(f(x), 0.0), quad_order)
}

/// Complex-valued counterpart of [`compute_spectrum`].
pub fn compute_spectrum_complex<F>(config: &FrftConfig, f: F, quad_order: usize) -> Result<FrftSpectrum>
where
    F: Fn(f64) -> Complex64,
{
    let min = config.min_quad_order();
    if quad_order < min {
        return Err(Error::QuadratureOrder { got: quad_order, min });
    }
    let rule = gauss_legendre(quad_order)?;
    let samples: Vec<(f64, Complex64)> = rule.iter().map(|(x, w)| (x, f(x) * w)).collect();
    spectrum_from_samples(config, &samples)
}

/// Spectrum from weighted samples `(x_q, w_q f(x_q))` with `sum_q w_q g(x_q)`
/// approximating `∫_{-1}^{1} g`.
pub fn spectrum_from_samples(config: &FrftConfig, samples: &[(f64, Complex64)]) -> Result<FrftSpectrum> {
    let cot = config.cot();
    let chirped: Vec<(f64, Complex64)> = samples.iter().map(|&(x, wf)| (x, wf * chirp(cot, x) * 0.5)).collect();
    let ks: Vec<i64> = config.wave_numbers().collect();
    let coeffs = ks
        .par_iter()
        .map(|&k| chirped.iter().map(|&(x, v)| v * wave(-k, x)).sum())
        .collect();
    FrftSpectrum::new(*config, coeffs)
}

/// Weighted samples of `f` under `rule` mapped onto `[a, b]`.
pub(crate) fn weighted_samples<F>(rule: &QuadratureRule, a: f64, b: f64, f: F) -> Vec<(f64, Complex64)>
where
    F: Fn(f64) -> f64,
{
    let half = 0.5 * (b - a);
    rule.iter()
        .map(|(t, w)| {
            let x = a + (t + 1.0) * half;
            (x, Complex64::new(w * half * f(x), 0.0))
        })
        .collect()
}

/// `f_N(x) = sum_k c_k phi_k(x)`.
pub fn partial_sum(spectrum: &FrftSpectrum, x: f64) -> Complex64 {
    let n = spectrum.config.big_n as i64;
    let trig: Complex64 = spectrum
        .coeffs
        .iter()
        .zip(-n..=n)
        .map(|(&c, k)| c * wave(k, x))
        .sum();
    trig * chirp(spectrum.config.cot(), x).conj()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn config_domain() {
        assert!(FrftConfig::new(0.0, 4).is_err());
        assert!(FrftConfig::new(1.6, 4).is_err());
        assert!(matches!(FrftConfig::new(1.0, 0), Err(Error::ZeroModes)));
        assert_eq!(FrftConfig::new(FRAC_PI_2, 3).unwrap().cot(), 0.0);
    }

    #[test]
    fn basis_examples() {
        let c = FrftConfig::new(FRAC_PI_2, 4).unwrap();
        assert_eq!(basis_eval(&c, 0, 0.77).unwrap(), Complex64::new(1.0, 0.0));
        let q = FrftConfig::new(FRAC_PI_4, 4).unwrap();
        let v = basis_eval(&q, 0, 1.0).unwrap();
        assert!((v - Complex64::cis(-0.5)).norm() < 1e-15);
        assert!(matches!(basis_eval(&q, 5, 0.0), Err(Error::WaveIndexOutOfRange { .. })));
    }

    #[test]
    fn quad_order_floor() {
        let c = FrftConfig::new(FRAC_PI_4, 10).unwrap();
        assert!(matches!(compute_spectrum(&c, |_| 1.0, 23), Err(Error::QuadratureOrder { min: 24, .. })));
        assert!(compute_spectrum(&c, |_| 1.0, 24).is_ok());
    }

    #[test]
    fn basis_function_has_unit_coefficient() {
        let c = FrftConfig::new(0.6, 12).unwrap();
        for j in [-12, -3, 0, 5, 12] {
            let s = compute_spectrum_complex(&c, |x| basis_eval(&c, j, x).unwrap(), 400).unwrap();
            for k in c.wave_numbers() {
                let want = if k == j { 1.0 } else { 0.0 };
                assert!((s.coeff(k).unwrap() - want).norm() <= 1e-12, "j={j} k={k}");
            }
        }
    }

    #[test]
    fn constant_at_classical_angle() {
        let c = FrftConfig::new(FRAC_PI_2, 16).unwrap();
        let s = compute_spectrum(&c, |_| 1.0, c.default_quad_order()).unwrap();
        for k in c.wave_numbers() {
            let want = if k == 0 { 1.0 } else { 0.0 };
            assert!((s.coeff(k).unwrap() - want).norm() <= 1e-13);
        }
        for x in [-1.0, -0.3, 0.0, 0.9, 1.0] {
            assert!((partial_sum(&s, x) - 1.0).norm() <= 1e-12);
        }
    }

    #[test]
    fn single_coefficient_partial_sum() {
        let c = FrftConfig::new(FRAC_PI_4, 3).unwrap();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 7];
        coeffs[3] = Complex64::new(1.0, 0.0);
        let s = FrftSpectrum::new(c, coeffs).unwrap();
        for x in [-0.8, 0.1, 1.0] {
            assert!((partial_sum(&s, x) - Complex64::cis(-0.5 * x * x)).norm() < 1e-15);
        }
    }

    #[test]
    fn chirp_removed_sum_is_trigonometric() {
        let c = FrftConfig::new(0.4, 20).unwrap();
        let s = compute_spectrum(&c, |x| (3.0 * x).sin() + x * x, c.default_quad_order()).unwrap();
        for x in [-0.9, -0.2, 0.55] {
            let trig: Complex64 = c
                .wave_numbers()
                .map(|k| s.coeff(k).unwrap() * Complex64::new(0.0, k as f64 * PI * x).exp())
                .sum();
            let lhs = partial_sum(&s, x) * Complex64::cis(0.5 * x * x * c.cot());
            assert!((lhs - trig).norm() <= 1e-12);
        }
    }

    #[test]
    fn real_function_is_hermitian_at_classical_angle() {
        let c = FrftConfig::new(FRAC_PI_2, 30).unwrap();
        let s = compute_spectrum(&c, |x| (2.0 * x).exp() - x, 400).unwrap();
        for k in 0..=30 {
            assert!((s.coeff(-k).unwrap() - s.coeff(k).unwrap().conj()).norm() <= 1e-13);
        }
    }

    #[test]
    fn bessel_inequality() {
        for alpha in [0.2, FRAC_PI_4, 1.3] {
            let c = FrftConfig::new(alpha, 40).unwrap();
            let f = |x: f64| if x < 0.2 { (x + 1.0).ln_1p() } else { 1.0 / (1.0 + 9.0 * x * x) };
            let s = compute_spectrum(&c, f, 2000).unwrap();
            let energy: f64 = s.coeffs().iter().map(|v| v.norm_sqr()).sum();
            let rule = gauss_legendre(2000).unwrap();
            let half_norm = 0.5 * rule.integrate(|x| f(x).powi(2));
            assert!(energy <= half_norm + 1e-10);
        }
    }

    #[test]
    fn constant_dc_coefficient_matches_chirp_integral() {
        // c_0 = (1/2) ∫ exp(i x^2 / 2) dx
        let c = FrftConfig::new(FRAC_PI_4, 4).unwrap();
        let s = compute_spectrum(&c, |_| 1.0, 400).unwrap();
        let oracle = gauss_legendre(64).unwrap().integrate_complex(|x| Complex64::cis(0.5 * x * x)) * 0.5;
        assert_relative_eq!(s.coeff(0).unwrap().re, oracle.re, epsilon = 1e-13);
        assert_relative_eq!(s.coeff(0).unwrap().im, oracle.im, epsilon = 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn basis_is_unimodular(k in -200i64..=200, x in -1.0f64..=1.0, alpha in 0.01f64..FRAC_PI_2) {
            let c = FrftConfig::new(alpha, 200).unwrap();
            prop_assert!((basis_eval(&c, k, x).unwrap().norm() - 1.0).abs() <= 1e-15);
        }
    }
}
