//! The six piecewise analytic test functions with their jumps and the poles
//! that limit convergence on each piece.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::reconstruct::{min_bernstein_rho, BernsteinRate, Evaluator, PiecewiseFunction};

pub const CORPUS_VERSION: &str = "f1-f6-v1";

#[derive(Debug, Clone)]
pub struct TestFunction {
    pub id: &'static str,
    pub formula: &'static str,
    pub function: PiecewiseFunction,
    /// Nearest singularities of each piece's analytic continuation; empty
    /// for entire pieces.
    pub singularities: Vec<Vec<Complex64>>,
}

impl TestFunction {
    pub fn bernstein(&self) -> Result<BernsteinRate> {
        min_bernstein_rho(&self.function, &self.singularities)
    }
}

#[derive(Debug, Clone)]
pub struct TestCorpus {
    functions: Vec<TestFunction>,
}

fn ev<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Evaluator {
    Arc::new(f)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pair(re: f64, im: f64) -> [Complex64; 2] {
    [c(re, im), c(re, -im)]
}

fn entry(
    id: &'static str,
    formula: &'static str,
    breakpoints: Vec<f64>,
    pieces: Vec<Evaluator>,
    jumps: Vec<f64>,
    singularities: Vec<Vec<Complex64>>,
) -> TestFunction {
    let function = PiecewiseFunction::new(breakpoints, pieces)
        .and_then(|f| f.with_jump_sizes(jumps))
        .expect("corpus definitions are well formed");
    TestFunction { id, formula, function, singularities }
}

impl TestCorpus {
    pub fn standard() -> Self {
        let functions = vec![
            entry(
                "f1",
                "1/(1+25x^2) - 1 on [-1,0); 1/(1+25x^2) + 1 on [0,1]",
                vec![0.0],
                vec![ev(|x| 1.0 / (1.0 + 25.0 * x * x) - 1.0), ev(|x| 1.0 / (1.0 + 25.0 * x * x) + 1.0)],
                vec![2.0],
                vec![pair(0.0, 0.2).to_vec(), pair(0.0, 0.2).to_vec()],
            ),
            entry(
                "f2",
                "1/(1+4x^2) on [-1,0.3); 1/(1+4(x-0.3)^2) + 1 on [0.3,1]",
                vec![0.3],
                vec![ev(|x| 1.0 / (1.0 + 4.0 * x * x)), ev(|x| 1.0 / (1.0 + 4.0 * (x - 0.3).powi(2)) + 1.0)],
                vec![1.26],
                vec![pair(0.0, 0.5).to_vec(), pair(0.3, 0.5).to_vec()],
            ),
            entry(
                "f3",
                "1/(1+16x^2) on [-1,-1/2); 1/(1+9x^2) + 1 on [-1/2,1/2); 1/(1+16x^2) on [1/2,1]",
                vec![-0.5, 0.5],
                vec![
                    ev(|x| 1.0 / (1.0 + 16.0 * x * x)),
                    ev(|x| 1.0 / (1.0 + 9.0 * x * x) + 1.0),
                    ev(|x| 1.0 / (1.0 + 16.0 * x * x)),
                ],
                vec![1.11, 1.11],
                vec![pair(0.0, 0.25).to_vec(), pair(0.0, 1.0 / 3.0).to_vec(), pair(0.0, 0.25).to_vec()],
            ),
            entry(
                "f4",
                "tanh(10x) on [-1,0); tanh(10x) + 2 on [0,1]",
                vec![0.0],
                vec![ev(|x| (10.0 * x).tanh()), ev(|x| (10.0 * x).tanh() + 2.0)],
                vec![2.0],
                vec![
                    [pair(0.0, PI / 20.0), pair(0.0, 3.0 * PI / 20.0)].concat(),
                    [pair(0.0, PI / 20.0), pair(0.0, 3.0 * PI / 20.0)].concat(),
                ],
            ),
            entry(
                "f5",
                "tanh(6(x+1/2)) - 1 on [-1,-1/2); tanh(4x) + 1 on [-1/2,1/2); tanh(6(x-1/2)) + 1 on [1/2,1]",
                vec![-0.5, 0.5],
                vec![
                    ev(|x| (6.0 * (x + 0.5)).tanh() - 1.0),
                    ev(|x| (4.0 * x).tanh() + 1.0),
                    ev(|x| (6.0 * (x - 0.5)).tanh() + 1.0),
                ],
                vec![1.04, 0.96],
                vec![pair(-0.5, PI / 12.0).to_vec(), pair(0.0, PI / 8.0).to_vec(), pair(0.5, PI / 12.0).to_vec()],
            ),
            entry(
                "f6",
                "tanh(8(x+1/2)) on [-1,-1/2); 1/(1+16x^2) on [-1/2,1/2); exp(-5(x-1/2)) on [1/2,1]",
                vec![-0.5, 0.5],
                vec![
                    ev(|x| (8.0 * (x + 0.5)).tanh()),
                    ev(|x| 1.0 / (1.0 + 16.0 * x * x)),
                    ev(|x| (-5.0 * (x - 0.5)).exp()),
                ],
                vec![0.2, 0.8],
                vec![pair(-0.5, PI / 16.0).to_vec(), pair(0.0, 0.25).to_vec(), Vec::new()],
            ),
        ];
        Self { functions }
    }

    pub fn functions(&self) -> &[TestFunction] {
        &self.functions
    }

    pub fn ids(&self) -> Vec<&'static str> {
        self.functions.iter().map(|f| f.id).collect()
    }

    pub fn get(&self, id: &str) -> Result<&TestFunction> {
        self.functions
            .iter()
            .find(|f| f.id == id)
            .ok_or_else(|| Error::UnknownFunction(id.to_string()))
    }

    /// Checks every declared jump against the one-sided limits of the
    /// neighbouring pieces, to `1e-2`.
    pub fn self_check(&self) -> Result<()> {
        for tf in &self.functions {
            let f = &tf.function;
            let jumps = f.jump_sizes().unwrap_or(&[]);
            for (i, (&x, &declared)) in f.breakpoints().iter().zip(jumps).enumerate() {
                let measured = ((f.piece(i + 1))(x) - (f.piece(i))(x)).abs();
                if (measured - declared).abs() > 1e-2 {
                    return Err(Error::CorpusCheck(format!(
                        "{} jump at x = {x}: declared {declared}, measured {measured:.4}",
                        tf.id
                    )));
                }
            }
            if tf.singularities.len() != f.num_pieces() {
                return Err(Error::CorpusCheck(format!("{}: singularity lists do not match pieces", tf.id)));
            }
        }
        Ok(())
    }
}
