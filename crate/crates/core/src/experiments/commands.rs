//! The five sweep commands. Each turns a [`Resolved`] configuration into
//! deterministic tables; [`run`] writes them out with their metadata.

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gegenbauer::{gram_matrix, GegenbauerBasis};
use crate::linalg::{condition_report, singular_values, symmetric_eigenvalues};
use crate::reconstruct::{
    direct_reconstruct_with, iprm_reconstruct_with, partial_sum_report_with, IprmSolver, ReconstructOptions,
    ReconstructionReport, SpectrumQuadrature,
};
use crate::transform::assemble_default;

use super::config::{angle_set, Command, Resolved, RunConfig};
use super::corpus::{TestCorpus, TestFunction};
use super::output::{write_metadata, Cell, Table};

fn job_error(function: &str, alpha: f64, lambda: f64, m: usize) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::Job { function: function.to_string(), alpha, lambda, m, source: Box::new(e) }
}

fn options(r: &Resolved, big_n: usize) -> ReconstructOptions {
    ReconstructOptions {
        piece_quad_order: r.quad_order,
        spectrum: SpectrumQuadrature::Global { order: r.quad_order.unwrap_or_else(|| 2000.max(6 * big_n)) },
        ..Default::default()
    }
}

/// One IPRM solver per `(alpha, lambda, m)`, shared by all functions.
struct SolverCache {
    keys: Vec<(f64, f64, usize)>,
    solvers: Vec<IprmSolver>,
}

impl SolverCache {
    fn build(r: &Resolved) -> Result<Self> {
        let mut keys = Vec::new();
        for &a in &r.alpha {
            for &l in &r.lambda {
                for &m in &r.m {
                    keys.push((a, l, m));
                }
            }
        }
        let solvers = keys
            .par_iter()
            .map(|&(a, l, m)| IprmSolver::new(a, l, m, r.big_n_for(m)).map_err(job_error("-", a, l, m)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { keys, solvers })
    }

    fn get(&self, alpha: f64, lambda: f64, m: usize) -> &IprmSolver {
        let i = self
            .keys
            .iter()
            .position(|&k| k == (alpha, lambda, m))
            .expect("solver cache covers every resolved key");
        &self.solvers[i]
    }
}

fn functions<'a>(corpus: &'a TestCorpus, r: &Resolved) -> Result<Vec<&'a TestFunction>> {
    r.functions.iter().map(|id| corpus.get(id)).collect()
}

/// Extreme singular values of `W_alpha` over `(lambda, m, alpha)`.
pub fn cond_sweep(r: &Resolved) -> Result<Table> {
    let mut jobs = Vec::new();
    for &l in &r.lambda {
        for &m in &r.m {
            for &a in &r.alpha {
                jobs.push((l, m, a));
            }
        }
    }
    if r.alpha_sweep_default {
        jobs.extend(angle_set().into_iter().map(|a| (crate::DEFAULT_LAMBDA, 16, a)));
    }
    jobs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.total_cmp(&y.2)));
    jobs.dedup();

    let reports = jobs
        .par_iter()
        .map(|&(l, m, a)| {
            let basis = GegenbauerBasis::new(l, m)?;
            condition_report(&assemble_default(a, &basis, r.big_n_for(m))?)
        })
        .zip(jobs.par_iter())
        .map(|(res, &(l, m, a))| res.map_err(job_error("-", a, l, m)))
        .collect::<Result<Vec<_>>>()?;

    let mut t = Table::new(
        "cond-sweep",
        vec!["lambda", "m", "alpha", "big_n", "sigma_max", "sigma_min", "kappa"],
    );
    for c in reports {
        t.push(vec![
            c.lambda.into(),
            c.m.into(),
            c.alpha.into(),
            c.big_n.into(),
            c.sigma_max.into(),
            c.sigma_min.into(),
            c.kappa.into(),
        ]);
    }
    Ok(t)
}

/// Coefficients of one reconstruction, for the JSON side file.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientRecord {
    pub function: String,
    pub method: String,
    pub alpha: f64,
    pub lambda: f64,
    pub m: usize,
    pub big_n: usize,
    /// `[re, im]` pairs per piece
    pub pieces: Vec<Vec<[f64; 2]>>,
}

pub struct ReconstructOutput {
    pub errors: Table,
    pub grid: Option<Table>,
    pub coefficients: Vec<CoefficientRecord>,
}

/// Partial sum, direct projection and IPRM errors for every function.
pub fn reconstruct(r: &Resolved) -> Result<ReconstructOutput> {
    let corpus = TestCorpus::standard();
    let fns = functions(&corpus, r)?;
    let cache = SolverCache::build(r)?;
    let mut jobs = Vec::new();
    for tf in &fns {
        for &a in &r.alpha {
            for &l in &r.lambda {
                for &m in &r.m {
                    jobs.push((*tf, a, l, m));
                }
            }
        }
    }
    let results = jobs
        .par_iter()
        .map(|&(tf, a, l, m)| {
            let big_n = r.big_n_for(m);
            let opts = options(r, big_n);
            let f = &tf.function;
            let run = || -> Result<[ReconstructionReport; 3]> {
                Ok([
                    partial_sum_report_with(f, a, big_n, &opts)?,
                    direct_reconstruct_with(f, a, l, m, big_n, &opts)?,
                    iprm_reconstruct_with(f, cache.get(a, l, m), &opts)?,
                ])
            };
            run().map_err(job_error(tf.id, a, l, m))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut errors = Table::new(
        "reconstruct",
        vec!["function", "alpha", "lambda", "m", "big_n", "method", "rel_l2", "abs_linf"],
    );
    let mut grid = Table::new(
        "reconstruct-grid",
        vec!["function", "alpha", "lambda", "m", "method", "x", "exact", "approx_re", "approx_im"],
    );
    let mut coefficients = Vec::new();
    for (&(tf, a, l, m), reports) in jobs.iter().zip(&results) {
        let big_n = r.big_n_for(m);
        let xs = options(r, big_n).grid.points(&tf.function)?;
        for rep in reports {
            let method = rep.method.as_str();
            errors.push(vec![
                tf.id.into(),
                a.into(),
                l.into(),
                m.into(),
                big_n.into(),
                method.into(),
                rep.rel_l2.into(),
                rep.abs_linf.into(),
            ]);
            if r.dense_grid {
                for &x in &xs {
                    let v = rep.approximant.eval(x);
                    grid.push(vec![
                        tf.id.into(),
                        a.into(),
                        l.into(),
                        m.into(),
                        method.into(),
                        x.into(),
                        tf.function.eval(x).into(),
                        v.re.into(),
                        v.im.into(),
                    ]);
                }
            }
            if !rep.per_piece_coeffs.is_empty() {
                coefficients.push(CoefficientRecord {
                    function: tf.id.to_string(),
                    method: method.to_string(),
                    alpha: a,
                    lambda: l,
                    m,
                    big_n,
                    pieces: rep
                        .per_piece_coeffs
                        .iter()
                        .map(|g| g.iter().map(|v| [v.re, v.im]).collect())
                        .collect(),
                });
            }
        }
    }
    Ok(ReconstructOutput { errors, grid: r.dense_grid.then_some(grid), coefficients })
}

/// Least-squares slope of `ln e` against `m`; `exp(-slope)` is the
/// empirical convergence factor per unit degree.
pub fn fitted_rate(ms: &[usize], errors: &[f64]) -> f64 {
    if ms.len() < 2 {
        return f64::NAN;
    }
    let n = ms.len() as f64;
    let xs: Vec<f64> = ms.iter().map(|&m| m as f64).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    (-sxy / sxx).exp()
}

/// IPRM maximum error as the degree grows, with fitted and analytic rates.
pub fn error_decay(r: &Resolved) -> Result<Table> {
    let corpus = TestCorpus::standard();
    let fns = functions(&corpus, r)?;
    let cache = SolverCache::build(r)?;
    let mut jobs = Vec::new();
    for tf in &fns {
        for &a in &r.alpha {
            for &l in &r.lambda {
                for &m in &r.m {
                    jobs.push((*tf, a, l, m));
                }
            }
        }
    }
    let errs = jobs
        .par_iter()
        .map(|&(tf, a, l, m)| {
            iprm_reconstruct_with(&tf.function, cache.get(a, l, m), &options(r, r.big_n_for(m)))
                .map(|rep| rep.abs_linf)
                .map_err(job_error(tf.id, a, l, m))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut t = Table::new(
        "error-decay",
        vec!["function", "alpha", "lambda", "m", "big_n", "abs_linf", "rho_empirical", "rho_analytic"],
    );
    let per_series = r.m.len();
    for (chunk_jobs, chunk_errs) in jobs.chunks(per_series).zip(errs.chunks(per_series)) {
        let tf = chunk_jobs[0].0;
        let rho_emp = fitted_rate(&r.m, chunk_errs);
        let rho = tf.bernstein().map_err(job_error(tf.id, chunk_jobs[0].1, chunk_jobs[0].2, 0))?.rho;
        for (&(_, a, l, m), &e) in chunk_jobs.iter().zip(chunk_errs) {
            t.push(vec![
                tf.id.into(),
                a.into(),
                l.into(),
                m.into(),
                r.big_n_for(m).into(),
                e.into(),
                rho_emp.into(),
                rho.into(),
            ]);
        }
    }
    Ok(t)
}

/// Spread of the IPRM maximum error over the angle set.
pub fn alpha_sweep(r: &Resolved) -> Result<Table> {
    let corpus = TestCorpus::standard();
    let fns = functions(&corpus, r)?;
    let cache = SolverCache::build(r)?;
    let mut jobs = Vec::new();
    for tf in &fns {
        for &l in &r.lambda {
            for &m in &r.m {
                for &a in &r.alpha {
                    jobs.push((*tf, l, m, a));
                }
            }
        }
    }
    let errs = jobs
        .par_iter()
        .map(|&(tf, l, m, a)| {
            iprm_reconstruct_with(&tf.function, cache.get(a, l, m), &options(r, r.big_n_for(m)))
                .map(|rep| rep.abs_linf)
                .map_err(job_error(tf.id, a, l, m))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut t = Table::new(
        "alpha-sweep",
        vec!["function", "lambda", "m", "alpha", "big_n", "e_alpha", "e_mean", "deviation"],
    );
    let per_group = r.alpha.len();
    for (group, es) in jobs.chunks(per_group).zip(errs.chunks(per_group)) {
        let mean = es.iter().sum::<f64>() / es.len() as f64;
        for (&(tf, l, m, a), &e) in group.iter().zip(es) {
            let deviation = if mean == 0.0 { 0.0 } else { (e - mean).abs() / mean };
            t.push(vec![
                tf.id.into(),
                l.into(),
                m.into(),
                a.into(),
                r.big_n_for(m).into(),
                e.into(),
                mean.into(),
                deviation.into(),
            ]);
        }
    }
    Ok(t)
}

pub struct GramOutput {
    pub entries: Table,
    pub summary: Table,
}

/// Gram matrices, their spectra, and the tail `Gr - 2 W* W` for each N.
pub fn gram(r: &Resolved) -> Result<GramOutput> {
    let mut entries = Table::new("gram-entries", vec!["lambda", "m", "l", "j", "value"]);
    let mut summary = Table::new(
        "gram",
        vec![
            "lambda",
            "m",
            "big_n",
            "alpha",
            "lambda_min",
            "lambda_max",
            "min_h",
            "tail_fro",
            "tail_2",
            "sigma_min_sq",
            "sigma_max_sq",
            "lower_bound",
            "upper_bound",
            "sandwich_holds",
        ],
    );
    for &l in &r.lambda {
        for &m in &r.m {
            let err = job_error("-", f64::NAN, l, m);
            let basis = GegenbauerBasis::new(l, m).map_err(&err)?;
            let gr = gram_matrix(&basis).entries;
            let ev = symmetric_eigenvalues(&gr).map_err(&err)?;
            let (lmax, lmin) = (ev[0], ev[ev.len() - 1]);
            let min_h = (0..=m)
                .map(|j| basis.h_constant(j))
                .collect::<Result<Vec<_>>>()
                .map_err(&err)?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            for i in 0..=m {
                for j in 0..=m {
                    entries.push(vec![l.into(), m.into(), i.into(), j.into(), gr[(i, j)].into()]);
                }
            }
            let ns = r.big_n.clone().unwrap_or_else(|| vec![r.big_n_for(m), 2 * r.big_n_for(m)]);
            let mut jobs = Vec::new();
            for &n in &ns {
                for &a in &r.alpha {
                    jobs.push((n, a));
                }
            }
            let grc = gr.map(|v| Complex64::new(v, 0.0));
            let rows = jobs
                .par_iter()
                .map(|&(n, a)| -> Result<Vec<Cell>> {
                    let w = assemble_default(a, &basis, n).map_err(job_error("-", a, l, m))?;
                    let tail: DMatrix<Complex64> = &grc - (w.entries.adjoint() * &w.entries) * Complex64::new(2.0, 0.0);
                    let tail_2 = singular_values(&tail)?[0];
                    let sv = singular_values(&w.entries)?;
                    let (smax, smin) = (sv[0], sv[sv.len() - 1]);
                    let (lower, upper) = (0.5 * (lmin - tail_2), 0.5 * lmax);
                    let holds = lower <= smin * smin + 1e-12 && smax * smax <= upper + 1e-12;
                    Ok(vec![
                        l.into(),
                        m.into(),
                        n.into(),
                        a.into(),
                        lmin.into(),
                        lmax.into(),
                        min_h.into(),
                        tail.norm().into(),
                        tail_2.into(),
                        (smin * smin).into(),
                        (smax * smax).into(),
                        lower.into(),
                        upper.into(),
                        (holds as usize).into(),
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            for row in rows {
                summary.push(row);
            }
        }
    }
    Ok(GramOutput { entries, summary })
}

/// Resolves `config` for `command`, runs it, and writes the CSV files plus
/// `<command>.meta.json` under `out`. Returns the written paths.
pub fn run(command: Command, config: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    TestCorpus::standard().self_check()?;
    let r = config.resolve(command)?;
    std::fs::create_dir_all(out)?;
    let mut tables = Vec::new();
    let mut extra = Vec::new();
    match command {
        Command::CondSweep => tables.push(cond_sweep(&r)?),
        Command::Reconstruct => {
            let o = reconstruct(&r)?;
            tables.push(o.errors);
            tables.extend(o.grid);
            let path = out.join("reconstruct-coefficients.json");
            std::fs::write(&path, serde_json::to_string_pretty(&o.coefficients)?)?;
            extra.push(path);
        }
        Command::ErrorDecay => tables.push(error_decay(&r)?),
        Command::AlphaSweep => tables.push(alpha_sweep(&r)?),
        Command::Gram => {
            let o = gram(&r)?;
            tables.push(o.summary);
            tables.push(o.entries);
        }
    }
    let mut files = Vec::new();
    for t in &tables {
        let path = out.join(format!("{}.csv", t.name));
        t.write_csv(&path)?;
        files.push(path);
    }
    files.extend(extra);
    let meta = write_metadata(out, &r, &files)?;
    files.push(meta);
    Ok(files)
}
