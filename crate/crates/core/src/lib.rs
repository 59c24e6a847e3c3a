//! Gibbs-free reconstruction of piecewise analytic functions from truncated
//! fractional Fourier series.
//!
//! The fractional Fourier basis on `[-1, 1]` is the chirp-modulated exponential
//! `phi_k(x) = exp(-i x^2 cot(alpha) / 2) exp(i k pi x)`. Given the `2N + 1`
//! coefficients `c_k = <f, phi_k>` of a smooth piece, the inverse polynomial
//! reconstruction finds the Gegenbauer expansion `sum_l g_l C_l(x)` whose own
//! fractional coefficients match the data in the least-squares sense. The
//! resulting approximation converges exponentially in the degree `m`, where
//! the truncated partial sum stalls at O(1) error near every jump.
//!
//! Module map:
//!
//! * [`numerics`]: Gauss-Legendre rules, the complex error function, affine maps.
//! * [`gegenbauer`]: polynomial evaluation, normalization constants, Gram matrices.
//! * [`frft`]: fractional basis, coefficients and partial sums.
//! * [`transform`]: the transformation matrix `W_alpha` and the direct-method matrix.
//! * [`linalg`]: least squares, singular values, condition reports.
//! * [`reconstruct`]: piecewise reconstruction, error metrics, Bernstein rates.
//! * [`experiments`]: the test-function corpus and the sweep commands behind the CLI.

pub mod error;
pub mod experiments;
pub mod frft;
pub mod gegenbauer;
pub mod linalg;
pub mod numerics;
pub mod reconstruct;
pub mod transform;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Default Gegenbauer parameter; balances the growth of the extreme
/// singular values of the transformation matrix.
pub const DEFAULT_LAMBDA: f64 = 0.75;

/// Default ratio `N / m` between Fourier modes and polynomial degree.
pub const DEFAULT_N_RATIO: usize = 10;
