//! Numerical kernels shared by every other module: Gauss-Legendre rules,
//! the Faddeeva function and complex error function, and affine interval maps.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
///
/// Nodes are strictly increasing and exactly antisymmetric; weights are
/// exactly symmetric. A rule of order `Q` integrates polynomials of degree
/// `2Q - 1` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `∫_{-1}^{1} f(x) dx`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// Complex-valued integrand on `[-1, 1]`.
    pub fn integrate_complex<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        self.iter().map(|(x, w)| f(x) * w).sum()
    }

    /// `∫_a^b f(x) dx` through the affine map onto `[-1, 1]`.
    pub fn integrate_on<F: Fn(f64) -> f64>(&self, map: &AffineMap, f: F) -> f64 {
        map.half_width() * self.integrate(|t| f(map.from_unit(t)))
    }
}

/// Gauss-Legendre rule of the given order.
///
/// Nodes are the roots of `P_Q`, found by Newton iteration on the Legendre
/// three-term recurrence started from the Tricomi-type estimate
/// `cos(pi (i + 3/4) / (Q + 1/2))`.
pub fn gauss_legendre(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::QuadratureOrder { got: 0, min: 1 });
    }
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    let nf = n as f64;

    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        if n % 2 == 1 && i == half - 1 {
            x = 0.0;
        }
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                break;
            }
        }
        // refresh the derivative at the converged root
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() && d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x_i is the i-th largest root
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Affine bijection between `[a, b]` and `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    a: f64,
    b: f64,
}

impl AffineMap {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn unit() -> Self {
        Self { a: -1.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.b - self.a)
    }

    /// Image of `x ∈ [a, b]` in `[-1, 1]`; `a ↦ -1` and `b ↦ 1` exactly.
    pub fn to_unit(&self, x: f64) -> f64 {
        2.0 * ((x - self.a) / (self.b - self.a)) - 1.0
    }

    /// Image of `t ∈ [-1, 1]` in `[a, b]`; `-1 ↦ a` exactly.
    pub fn from_unit(&self, t: f64) -> f64 {
        self.a + (t + 1.0) * self.half_width()
    }

    /// Complex extension of [`AffineMap::to_unit`], used to carry
    /// singularities into the reference interval.
    pub fn to_unit_complex(&self, z: Complex64) -> Complex64 {
        (z - self.a) * (2.0 / (self.b - self.a)) - 1.0
    }
}

/// Free-function form of [`AffineMap::to_unit`].
pub fn map_to_unit(map: &AffineMap, x: f64) -> f64 {
    map.to_unit(x)
}

/// Free-function form of [`AffineMap::from_unit`].
pub fn map_from_unit(map: &AffineMap, t: f64) -> f64 {
    map.from_unit(t)
}

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Number of terms in Weideman's rational expansion of `w(z)`.
const WEIDEMAN_TERMS: usize = 64;

/// Beyond this modulus the Laplace continued fraction is used.
const CONTINUED_FRACTION_RADIUS: f64 = 8.0;

struct Weideman {
    l: f64,
    coeffs: Vec<f64>,
}

fn weideman() -> &'static Weideman {
    static TABLE: OnceLock<Weideman> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = WEIDEMAN_TERMS;
        let m = 2 * n;
        let m2 = 2 * m;
        let l = (n as f64 / std::f64::consts::SQRT_2).sqrt();
        // samples of exp(-t^2)(L^2 + t^2) at t = L tan(theta / 2), with a
        // leading zero, then rotated by m (fftshift)
        let mut f = vec![0.0; m2];
        for (idx, k) in (-(m as i64) + 1..m as i64).enumerate() {
            let theta = k as f64 * PI / m as f64;
            let t = l * (0.5 * theta).tan();
            f[idx + 1] = (-t * t).exp() * (l * l + t * t);
        }
        let shifted: Vec<f64> = (0..m2).map(|i| f[(i + m) % m2]).collect();
        let coeffs = (1..=n)
            .map(|j| {
                let s: f64 = shifted
                    .iter()
                    .enumerate()
                    .map(|(p, v)| v * (2.0 * PI * ((j * p) % m2) as f64 / m2 as f64).cos())
                    .sum();
                s / m2 as f64
            })
            .collect();
        Weideman { l, coeffs }
    })
}

/// Faddeeva function `w(z) = exp(-z^2) erfc(-i z)`.
///
/// In the closed upper half plane this uses the Laplace continued fraction
/// for `|z| >= 8` and Weideman's 64-term rational approximation otherwise;
/// both are accurate to a few ulps relative there. The lower half plane
/// follows from `w(z) = 2 exp(-z^2) - w(-z)`.
pub fn faddeeva(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return 2.0 * (-z * z).exp() - faddeeva(-z);
    }
    let r = z.norm();
    if r >= CONTINUED_FRACTION_RADIUS {
        let depth = if r >= 20.0 { 20 } else { 40 };
        let mut tail = Complex64::new(0.0, 0.0);
        for k in (1..=depth).rev() {
            tail = (0.5 * k as f64) / (z - tail);
        }
        Complex64::new(0.0, FRAC_1_SQRT_PI) / (z - tail)
    } else {
        let table = weideman();
        let iz = Complex64::i() * z;
        let denom = table.l - iz;
        let zeta = (table.l + iz) / denom;
        let p = table
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * zeta + c);
        2.0 * p / (denom * denom) + FRAC_1_SQRT_PI / denom
    }
}

/// Complex error function `erf(z) = 2/sqrt(pi) ∫_0^z exp(-t^2) dt`.
///
/// Reduced to the closed first quadrant by `erf(-z) = -erf(z)` and
/// `erf(conj z) = conj erf(z)`, then `erf(z) = 1 - exp(-z^2) w(i z)`;
/// small arguments use the Maclaurin series to avoid the cancellation in
/// `1 - (...)`.
pub fn complex_erf(z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        return -complex_erf(-z);
    }
    if z.im < 0.0 {
        return complex_erf(z.conj()).conj();
    }
    if z.norm() < 1.0 {
        return erf_series(z);
    }
    1.0 - (-z * z).exp() * faddeeva(Complex64::i() * z)
}

fn erf_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut term = z; // (-1)^n z^(2n+1) / n!
    let mut sum = z;
    for n in 1..60 {
        term *= -z2 / n as f64;
        let add = term / (2 * n + 1) as f64;
        sum += add;
        if add.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum * (2.0 * FRAC_1_SQRT_PI)
}
