//! Piecewise reconstruction: per-piece inverse polynomial reconstruction, the
//! direct Gegenbauer projection and raw partial sums as baselines, error
//! metrics on a fixed grid, and Bernstein-ellipse convergence rates.

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frft::{compute_spectrum, partial_sum, spectrum_from_samples, weighted_samples, FrftConfig, FrftSpectrum};
use crate::gegenbauer::GegenbauerBasis;
use crate::linalg::{condition_report, ConditionReport, LeastSquares};
use crate::numerics::{gauss_legendre, AffineMap};
use crate::transform::{assemble_default, assemble_direct_default, TransformMatrix};

pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Piecewise smooth function on `[-1, 1]`. A point equal to a breakpoint
/// belongs to the piece on its right.
#[derive(Clone)]
pub struct PiecewiseFunction {
    breakpoints: Vec<f64>,
    pieces: Vec<Evaluator>,
    jump_sizes: Option<Vec<f64>>,
}

impl fmt::Debug for PiecewiseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiecewiseFunction")
            .field("breakpoints", &self.breakpoints)
            .field("pieces", &self.pieces.len())
            .field("jump_sizes", &self.jump_sizes)
            .finish()
    }
}

impl PiecewiseFunction {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Evaluator>) -> Result<Self> {
        let inside = breakpoints.iter().all(|&b| b > -1.0 && b < 1.0);
        let sorted = breakpoints.windows(2).all(|p| p[0] < p[1]);
        if !inside || !sorted {
            return Err(Error::InvalidBreakpoints);
        }
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::PieceCount { expected: breakpoints.len() + 1, got: pieces.len() });
        }
        Ok(Self { breakpoints, pieces, jump_sizes: None })
    }

    /// A single smooth piece on `[-1, 1]`.
    pub fn smooth<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self { breakpoints: Vec::new(), pieces: vec![Arc::new(f)], jump_sizes: None }
    }

    pub fn with_jump_sizes(mut self, jumps: Vec<f64>) -> Result<Self> {
        if jumps.len() != self.breakpoints.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} jump sizes for {} breakpoints",
                jumps.len(),
                self.breakpoints.len()
            )));
        }
        self.jump_sizes = Some(jumps);
        Ok(self)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn jump_sizes(&self) -> Option<&[f64]> {
        self.jump_sizes.as_deref()
    }

    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    pub fn piece(&self, i: usize) -> &Evaluator {
        &self.pieces[i]
    }

    /// `[a_i, b_i]` for every piece.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        let mut edges = Vec::with_capacity(self.breakpoints.len() + 2);
        edges.push(-1.0);
        edges.extend_from_slice(&self.breakpoints);
        edges.push(1.0);
        edges.windows(2).map(|p| (p[0], p[1])).collect()
    }

    pub fn piece_index(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|&b| b <= x)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.pieces[self.piece_index(x)])(x)
    }
}

/// Evaluation grid: each piece is cut into equal cells and sampled at the
/// cell midpoints, so breakpoints are never sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GridSpec {
    /// Cells of (at most) this width; `ceil(len / h)` cells per piece.
    Spacing(f64),
    /// A fixed number of cells per piece.
    CellsPerPiece(usize),
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Spacing(0.002)
    }
}

impl GridSpec {
    /// `(x, cell width)` pairs on `[a, b]`.
    pub fn cells(&self, a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
        let len = b - a;
        let count = match *self {
            GridSpec::Spacing(h) if h > 0.0 && h.is_finite() => ((len / h) - 1e-9).ceil().max(1.0) as usize,
            GridSpec::CellsPerPiece(n) if n > 0 => n,
            _ => return Err(Error::EmptyGrid),
        };
        let width = len / count as f64;
        Ok((0..count).map(|j| (a + (j as f64 + 0.5) * width, width)).collect())
    }

    /// All grid points of `f`, ascending.
    pub fn points(&self, f: &PiecewiseFunction) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        for (a, b) in f.intervals() {
            out.extend(self.cells(a, b)?.into_iter().map(|(x, _)| x));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorMetrics {
    pub rel_l2: f64,
    pub abs_linf: f64,
}

/// Errors of a complex approximation against a real target; the pointwise
/// error is the modulus of the complex difference. The relative L2 error uses
/// composite midpoint quadrature on each piece's cells.
pub fn error_metrics<A>(exact: &PiecewiseFunction, approx: A, grid: &GridSpec) -> Result<ErrorMetrics>
where
    A: Fn(f64) -> Complex64,
{
    let mut num = 0.0;
    let mut den = 0.0;
    let mut linf: f64 = 0.0;
    let mut count = 0;
    for (i, (a, b)) in exact.intervals().into_iter().enumerate() {
        let piece = exact.piece(i);
        for (x, h) in grid.cells(a, b)? {
            let fx = piece(x);
            let e = (approx(x) - fx).norm();
            linf = linf.max(e);
            num += h * e * e;
            den += h * fx * fx;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::EmptyGrid);
    }
    let rel_l2 = if num == 0.0 { 0.0 } else { (num / den).sqrt() };
    Ok(ErrorMetrics { rel_l2, abs_linf: linf })
}

/// How the coefficients of a whole piecewise function are integrated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SpectrumQuadrature {
    /// One Gauss-Legendre rule across `[-1, 1]`, jumps included.
    Global { order: usize },
    /// One rule per smooth piece; exact up to the rule's resolution.
    PerPiece { order: usize },
}

impl Default for SpectrumQuadrature {
    fn default() -> Self {
        SpectrumQuadrature::Global { order: 2000 }
    }
}

/// Spectrum of a piecewise function over `[-1, 1]`.
pub fn piecewise_spectrum(f: &PiecewiseFunction, config: &FrftConfig, quad: SpectrumQuadrature) -> Result<FrftSpectrum> {
    match quad {
        SpectrumQuadrature::Global { order } => compute_spectrum(config, |x| f.eval(x), order),
        SpectrumQuadrature::PerPiece { order } => {
            let min = config.min_quad_order();
            if order < min {
                return Err(Error::QuadratureOrder { got: order, min });
            }
            let rule = gauss_legendre(order)?;
            let mut samples = Vec::with_capacity(order * f.num_pieces());
            for (i, (a, b)) in f.intervals().into_iter().enumerate() {
                samples.extend(weighted_samples(&rule, a, b, |x| (f.piece(i))(x)));
            }
            spectrum_from_samples(config, &samples)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "frfs")]
    FrfsPartialSum,
    #[serde(rename = "direct")]
    Direct,
    #[serde(rename = "iprm")]
    Iprm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::FrfsPartialSum => "frfs",
            Method::Direct => "direct",
            Method::Iprm => "iprm",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::FrfsPartialSum => "frfs-partial-sum",
            other => other.as_str(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconstructionParams {
    pub alpha: f64,
    pub lambda: f64,
    pub m: usize,
    pub big_n: usize,
    pub quad_order: usize,
}

/// The approximation produced by a reconstruction, evaluable anywhere on
/// `[-1, 1]`.
#[derive(Debug, Clone)]
pub enum Approximant {
    /// One Gegenbauer expansion per piece, in the piece's local variable.
    Piecewise { basis: GegenbauerBasis, maps: Vec<AffineMap>, breakpoints: Vec<f64>, coeffs: Vec<Vec<Complex64>> },
    /// A single Gegenbauer expansion on `[-1, 1]`.
    Global { basis: GegenbauerBasis, coeffs: Vec<Complex64> },
    PartialSum(FrftSpectrum),
}

impl Approximant {
    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            Approximant::Piecewise { basis, maps, breakpoints, coeffs } => {
                let i = breakpoints.partition_point(|&b| b <= x);
                basis.eval_series(&coeffs[i], maps[i].to_unit(x))
            }
            Approximant::Global { basis, coeffs } => basis.eval_series(coeffs, x),
            Approximant::PartialSum(s) => partial_sum(s, x),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReconstructionReport {
    pub method: Method,
    pub per_piece_coeffs: Vec<Vec<Complex64>>,
    pub rel_l2: f64,
    pub abs_linf: f64,
    pub condition: Vec<ConditionReport>,
    pub params: ReconstructionParams,
    /// Always `"modulus"`: pointwise errors are `|f(x) - approx(x)|`.
    pub error_convention: &'static str,
    pub approximant: Approximant,
}

/// Where the direct projection takes its data from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum DirectScope {
    /// Project the partial sum of the whole function onto one expansion on
    /// `[-1, 1]`.
    #[default]
    Global,
    /// Project each mapped piece's own partial sum.
    PerPiece,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconstructOptions {
    pub grid: GridSpec,
    /// Per-piece coefficient quadrature order for the IPRM; `None` means
    /// `max(400, 6N)`.
    pub piece_quad_order: Option<usize>,
    /// Coefficient quadrature for the partial-sum and global direct baselines.
    pub spectrum: SpectrumQuadrature,
    pub direct_scope: DirectScope,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            piece_quad_order: None,
            spectrum: SpectrumQuadrature::default(),
            direct_scope: DirectScope::default(),
        }
    }
}

/// Transformation matrix and its factorization for one `(alpha, lambda, m, N)`;
/// every piece maps onto `[-1, 1]`, so one solver serves all of them.
#[derive(Debug, Clone)]
pub struct IprmSolver {
    basis: GegenbauerBasis,
    config: FrftConfig,
    matrix: TransformMatrix,
    ls: LeastSquares,
    condition: ConditionReport,
}

impl IprmSolver {
    pub fn new(alpha: f64, lambda: f64, m: usize, big_n: usize) -> Result<Self> {
        let basis = GegenbauerBasis::new(lambda, m)?;
        let config = FrftConfig::new(alpha, big_n)?;
        let matrix = assemble_default(alpha, &basis, big_n)?;
        let ls = LeastSquares::new(&matrix.entries)?;
        let condition = condition_report(&matrix)?;
        Ok(Self { basis, config, matrix, ls, condition })
    }

    pub fn basis(&self) -> &GegenbauerBasis {
        &self.basis
    }

    pub fn config(&self) -> &FrftConfig {
        &self.config
    }

    pub fn matrix(&self) -> &TransformMatrix {
        &self.matrix
    }

    pub fn condition(&self) -> ConditionReport {
        self.condition
    }

    /// Spectrum of `g` on `[-1, 1]`.
    pub fn spectrum<G: Fn(f64) -> f64>(&self, g: G, quad_order: Option<usize>) -> Result<FrftSpectrum> {
        compute_spectrum(&self.config, g, quad_order.unwrap_or_else(|| self.config.default_quad_order()))
    }

    /// Gegenbauer coefficients `G` minimizing `||W G - c||`.
    pub fn solve(&self, spectrum: &FrftSpectrum) -> Result<Vec<Complex64>> {
        let b = DVector::from_column_slice(spectrum.coeffs());
        Ok(self.ls.solve(&b)?.iter().copied().collect())
    }
}

fn params(alpha: f64, lambda: f64, m: usize, big_n: usize, quad_order: usize) -> ReconstructionParams {
    ReconstructionParams { alpha, lambda, m, big_n, quad_order }
}

fn piece_maps(f: &PiecewiseFunction) -> Result<Vec<AffineMap>> {
    f.intervals().into_iter().map(|(a, b)| AffineMap::new(a, b)).collect()
}

/// IPRM on every smooth piece with default options.
pub fn iprm_reconstruct(f: &PiecewiseFunction, alpha: f64, lambda: f64, m: usize, big_n: usize) -> Result<ReconstructionReport> {
    let solver = IprmSolver::new(alpha, lambda, m, big_n)?;
    iprm_reconstruct_with(f, &solver, &ReconstructOptions::default())
}

/// IPRM on every smooth piece with a prepared solver.
pub fn iprm_reconstruct_with(
    f: &PiecewiseFunction,
    solver: &IprmSolver,
    options: &ReconstructOptions,
) -> Result<ReconstructionReport> {
    let maps = piece_maps(f)?;
    let mut coeffs = Vec::with_capacity(maps.len());
    for (i, map) in maps.iter().enumerate() {
        let piece = f.piece(i);
        let spectrum = solver.spectrum(|t| piece(map.from_unit(t)), options.piece_quad_order)?;
        coeffs.push(solver.solve(&spectrum)?);
    }
    let approximant = Approximant::Piecewise {
        basis: solver.basis,
        maps,
        breakpoints: f.breakpoints().to_vec(),
        coeffs: coeffs.clone(),
    };
    let metrics = error_metrics(f, |x| approximant.eval(x), &options.grid)?;
    let p = solver.matrix.params;
    let quad = options.piece_quad_order.unwrap_or_else(|| solver.config.default_quad_order());
    Ok(ReconstructionReport {
        method: Method::Iprm,
        condition: vec![solver.condition; coeffs.len()],
        per_piece_coeffs: coeffs,
        rel_l2: metrics.rel_l2,
        abs_linf: metrics.abs_linf,
        params: params(p.alpha, p.lambda, p.m, p.big_n, quad),
        error_convention: "modulus",
        approximant,
    })
}

/// Direct Gegenbauer projection with default options.
pub fn direct_reconstruct(f: &PiecewiseFunction, alpha: f64, lambda: f64, m: usize, big_n: usize) -> Result<ReconstructionReport> {
    direct_reconstruct_with(f, alpha, lambda, m, big_n, &ReconstructOptions::default())
}

/// `g_l = sum_k c_k D_{k,l}`, then the Gegenbauer sum.
pub fn direct_reconstruct_with(
    f: &PiecewiseFunction,
    alpha: f64,
    lambda: f64,
    m: usize,
    big_n: usize,
    options: &ReconstructOptions,
) -> Result<ReconstructionReport> {
    let basis = GegenbauerBasis::new(lambda, m)?;
    let config = FrftConfig::new(alpha, big_n)?;
    let d = assemble_direct_default(alpha, &basis, big_n)?;
    let project = |s: &FrftSpectrum| -> Vec<Complex64> {
        let c = DVector::from_column_slice(s.coeffs());
        (d.entries.transpose() * c).iter().copied().collect()
    };
    let (coeffs, approximant, quad) = match options.direct_scope {
        DirectScope::Global => {
            let s = piecewise_spectrum(f, &config, options.spectrum)?;
            let g = project(&s);
            let quad = match options.spectrum {
                SpectrumQuadrature::Global { order } | SpectrumQuadrature::PerPiece { order } => order,
            };
            (vec![g.clone()], Approximant::Global { basis, coeffs: g }, quad)
        }
        DirectScope::PerPiece => {
            let maps = piece_maps(f)?;
            let quad = options.piece_quad_order.unwrap_or_else(|| config.default_quad_order());
            let mut all = Vec::with_capacity(maps.len());
            for (i, map) in maps.iter().enumerate() {
                let piece = f.piece(i);
                let s = compute_spectrum(&config, |t| piece(map.from_unit(t)), quad)?;
                all.push(project(&s));
            }
            let approximant = Approximant::Piecewise {
                basis,
                maps,
                breakpoints: f.breakpoints().to_vec(),
                coeffs: all.clone(),
            };
            (all, approximant, quad)
        }
    };
    let metrics = error_metrics(f, |x| approximant.eval(x), &options.grid)?;
    Ok(ReconstructionReport {
        method: Method::Direct,
        per_piece_coeffs: coeffs,
        rel_l2: metrics.rel_l2,
        abs_linf: metrics.abs_linf,
        condition: Vec::new(),
        params: params(alpha, lambda, m, big_n, quad),
        error_convention: "modulus",
        approximant,
    })
}

/// Raw fractional partial sum with default options.
pub fn partial_sum_report(f: &PiecewiseFunction, alpha: f64, big_n: usize) -> Result<ReconstructionReport> {
    partial_sum_report_with(f, alpha, big_n, &ReconstructOptions::default())
}

pub fn partial_sum_report_with(
    f: &PiecewiseFunction,
    alpha: f64,
    big_n: usize,
    options: &ReconstructOptions,
) -> Result<ReconstructionReport> {
    let config = FrftConfig::new(alpha, big_n)?;
    let s = piecewise_spectrum(f, &config, options.spectrum)?;
    let quad = match options.spectrum {
        SpectrumQuadrature::Global { order } | SpectrumQuadrature::PerPiece { order } => order,
    };
    let approximant = Approximant::PartialSum(s);
    let metrics = error_metrics(f, |x| approximant.eval(x), &options.grid)?;
    Ok(ReconstructionReport {
        method: Method::FrfsPartialSum,
        per_piece_coeffs: Vec::new(),
        rel_l2: metrics.rel_l2,
        abs_linf: metrics.abs_linf,
        condition: Vec::new(),
        params: params(alpha, f64::NAN, 0, big_n, quad),
        error_convention: "modulus",
        approximant,
    })
}

/// Bernstein-ellipse parameter of the piece nearest-singularity pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BernsteinRate {
    pub rho: f64,
    pub limiting_piece: usize,
}

/// `rho = |z0 + sqrt(z0^2 - 1)|` (branch with modulus > 1), where `z0` is the
/// singularity mapped from `[a, b]` onto `[-1, 1]`.
pub fn bernstein_rho(interval: (f64, f64), singularity: Complex64) -> Result<BernsteinRate> {
    let (a, b) = interval;
    let map = AffineMap::new(a, b)?;
    if singularity.im == 0.0 && singularity.re >= a && singularity.re <= b {
        return Err(Error::SingularityOnInterval { re: singularity.re, im: singularity.im, a, b });
    }
    let z0 = map.to_unit_complex(singularity);
    let r = (z0 * z0 - 1.0).sqrt();
    let rho = (z0 + r).norm().max((z0 - r).norm());
    Ok(BernsteinRate { rho, limiting_piece: 0 })
}

/// Smallest `rho` over all pieces and their singularities; a piece with no
/// listed singularity (entire) contributes `rho = inf`.
pub fn min_bernstein_rho(f: &PiecewiseFunction, singularities: &[Vec<Complex64>]) -> Result<BernsteinRate> {
    if singularities.len() != f.num_pieces() {
        return Err(Error::PieceCount { expected: f.num_pieces(), got: singularities.len() });
    }
    let mut best = BernsteinRate { rho: f64::INFINITY, limiting_piece: 0 };
    for (i, (interval, sing)) in f.intervals().into_iter().zip(singularities).enumerate() {
        for &s in sing {
            let r = bernstein_rho(interval, s)?;
            if r.rho < best.rho {
                best = BernsteinRate { rho: r.rho, limiting_piece: i };
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn step() -> PiecewiseFunction {
        PiecewiseFunction::new(vec![0.0], vec![Arc::new(|x| x - 1.0), Arc::new(|x| x + 1.0)]).unwrap()
    }

    #[test]
    fn piecewise_construction() {
        let f = step();
        assert_eq!(f.eval(-0.5), -1.5);
        assert_eq!(f.eval(0.0), 1.0);
        assert_eq!(f.intervals(), vec![(-1.0, 0.0), (0.0, 1.0)]);
        assert!(matches!(
            PiecewiseFunction::new(vec![0.5, 0.1], vec![Arc::new(|x| x); 3]),
            Err(Error::InvalidBreakpoints)
        ));
        assert!(matches!(PiecewiseFunction::new(vec![1.0], vec![Arc::new(|x| x); 2]), Err(Error::InvalidBreakpoints)));
        assert!(matches!(PiecewiseFunction::new(vec![0.0], vec![Arc::new(|x| x)]), Err(Error::PieceCount { .. })));
    }

    #[test]
    fn grid_avoids_breakpoints() {
        let f = PiecewiseFunction::new(vec![-0.5, 0.3], vec![Arc::new(|x| x); 3]).unwrap();
        let pts = GridSpec::default().points(&f).unwrap();
        assert_eq!(pts.len(), 1000);
        for (j, x) in pts.iter().enumerate() {
            assert!((x - (-1.0 + (j as f64 + 0.5) * 0.002)).abs() < 1e-12);
        }
        assert!(pts.iter().all(|x| !f.breakpoints().contains(x)));
        assert!(matches!(GridSpec::CellsPerPiece(0).points(&f), Err(Error::EmptyGrid)));
        assert!(matches!(GridSpec::Spacing(0.0).points(&f), Err(Error::EmptyGrid)));
    }

    #[test]
    fn error_metric_examples() {
        let one = PiecewiseFunction::smooth(|_| 1.0);
        let g = GridSpec::default();
        let zero = error_metrics(&one, |_| c(1.0, 0.0), &g).unwrap();
        assert_eq!((zero.rel_l2, zero.abs_linf), (0.0, 0.0));
        let shifted = error_metrics(&one, |_| c(1.001, 0.0), &g).unwrap();
        assert!((shifted.abs_linf - 1e-3).abs() < 1e-15);
        assert!((shifted.rel_l2 - 1e-3).abs() < 1e-15);
        let rotated = error_metrics(&one, |_| Complex64::cis(1e-3), &g).unwrap();
        assert!((rotated.abs_linf - 1e-3).abs() < 1e-9);
    }

    #[test]
    fn iprm_recovers_constant() {
        for alpha in [0.3, FRAC_PI_4, FRAC_PI_2] {
            let r = iprm_reconstruct(&PiecewiseFunction::smooth(|_| 1.0), alpha, 0.75, 4, 40).unwrap();
            let g = &r.per_piece_coeffs[0];
            assert!((g[0] - 1.0).norm() <= 1e-10);
            assert!(g[1..].iter().all(|v| v.norm() <= 1e-10));
            assert!(r.abs_linf <= 1e-10);
            assert_eq!(r.method, Method::Iprm);
        }
    }

    #[test]
    fn iprm_recovers_gegenbauer_polynomial() {
        let b = GegenbauerBasis::new(0.75, 2).unwrap();
        let f = PiecewiseFunction::smooth(move |x| b.eval(2, x).unwrap());
        let r = iprm_reconstruct(&f, FRAC_PI_4, 0.75, 6, 60).unwrap();
        let g = &r.per_piece_coeffs[0];
        for (l, v) in g.iter().enumerate() {
            let want = if l == 2 { 1.0 } else { 0.0 };
            assert!((v - want).norm() <= 1e-9, "l={l}: {v}");
        }
    }

    #[test]
    fn square_system_reproduces_data() {
        let solver = IprmSolver::new(0.7, 0.75, 8, 4).unwrap();
        let s = solver.spectrum(|x| (x + 0.3).exp(), None).unwrap();
        let g = DVector::from_vec(solver.solve(&s).unwrap());
        let c = DVector::from_column_slice(s.coeffs());
        let resid = &solver.matrix().entries * g - &c;
        assert!(resid.norm() <= 1e-9 * c.norm());
    }

    #[test]
    fn overdetermined_residual_is_least_squares() {
        let solver = IprmSolver::new(0.7, 0.75, 6, 30).unwrap();
        let s = solver.spectrum(|x| (3.0 * x).sin() / (1.5 + x), None).unwrap();
        let g = DVector::from_vec(solver.solve(&s).unwrap());
        let w = &solver.matrix().entries;
        let resid = w * g - DVector::from_column_slice(s.coeffs());
        assert!((w.adjoint() * resid).norm() <= 1e-10 * w.norm() * s.coeffs().len() as f64);
    }

    #[test]
    fn polynomials_reconstruct_exactly() {
        let f = PiecewiseFunction::smooth(|x| 0.5 - 2.0 * x + 3.0 * x.powi(3) - x.powi(6));
        for alpha in [std::f64::consts::PI / 16.0, FRAC_PI_4, 1.2, FRAC_PI_2] {
            let r = iprm_reconstruct(&f, alpha, 0.75, 8, 80).unwrap();
            assert!(r.abs_linf <= 1e-8, "alpha {alpha}: {}", r.abs_linf);
        }
    }

    #[test]
    fn direct_recovers_constant_classically() {
        let one = PiecewiseFunction::smooth(|_| 1.0);
        let r = direct_reconstruct(&one, FRAC_PI_2, 0.75, 4, 40).unwrap();
        assert!(r.abs_linf <= 1e-6, "{}", r.abs_linf);
        let opts = ReconstructOptions { direct_scope: DirectScope::PerPiece, ..Default::default() };
        let r = direct_reconstruct_with(&one, FRAC_PI_2, 0.75, 4, 40, &opts).unwrap();
        assert!(r.abs_linf <= 1e-6);
    }

    #[test]
    fn partial_sum_of_constant() {
        let one = PiecewiseFunction::smooth(|_| 1.0);
        let r = partial_sum_report(&one, FRAC_PI_2, 20).unwrap();
        assert!(r.abs_linf <= 1e-12 && r.rel_l2 <= 1e-12);
        assert_eq!(r.method.to_string(), "frfs-partial-sum");
    }

    #[test]
    fn spectrum_quadratures_agree_on_smooth_functions() {
        let f = PiecewiseFunction::new(vec![0.1], vec![Arc::new(|x: f64| x.cos()), Arc::new(|x: f64| x.cos())]).unwrap();
        let cfg = FrftConfig::new(0.9, 20).unwrap();
        let a = piecewise_spectrum(&f, &cfg, SpectrumQuadrature::Global { order: 400 }).unwrap();
        let b = piecewise_spectrum(&f, &cfg, SpectrumQuadrature::PerPiece { order: 200 }).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn bernstein_examples() {
        let r = bernstein_rho((-1.0, 0.0), c(0.0, 0.2)).unwrap();
        assert!((r.rho - 1.92).abs() < 5e-3);
        let r = bernstein_rho((-1.0, 1.0), c(2.0, 0.0)).unwrap();
        assert!((r.rho - (2.0 + 3f64.sqrt())).abs() < 1e-14);
        assert!(matches!(bernstein_rho((-1.0, 1.0), c(0.5, 0.0)), Err(Error::SingularityOnInterval { .. })));
        assert!(matches!(bernstein_rho((-1.0, 1.0), c(1.0, 0.0)), Err(Error::SingularityOnInterval { .. })));
    }

    #[test]
    fn min_rho_picks_limiting_piece() {
        let f = step();
        let sing = vec![vec![c(0.0, 0.5)], vec![c(0.0, 0.2), c(0.0, -0.2)]];
        let r = min_bernstein_rho(&f, &sing).unwrap();
        assert_eq!(r.limiting_piece, 1);
        assert!((r.rho - bernstein_rho((0.0, 1.0), c(0.0, 0.2)).unwrap().rho).abs() < 1e-15);
        let none = min_bernstein_rho(&f, &[vec![], vec![]]).unwrap();
        assert!(none.rho.is_infinite());
        assert!(matches!(min_bernstein_rho(&f, &[vec![]]), Err(Error::PieceCount { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn rho_exceeds_one(a in -1.0f64..0.5, len in 0.05f64..1.0, re in -3.0f64..3.0, im in 1e-3f64..3.0) {
            let r = bernstein_rho((a, a + len), c(re, im)).unwrap();
            prop_assert!(r.rho > 1.0);
            let conj = bernstein_rho((a, a + len), c(re, -im)).unwrap();
            prop_assert!((r.rho - conj.rho).abs() <= 1e-12 * r.rho);
        }
    }
}
