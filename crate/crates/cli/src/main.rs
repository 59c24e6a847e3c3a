use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, ValueEnum};
use frft_iprm::experiments::{self, parse_angle, Angle, Command, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    CondSweep,
    Reconstruct,
    ErrorDecay,
    AlphaSweep,
    Gram,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::CondSweep => Command::CondSweep,
            Cmd::Reconstruct => Command::Reconstruct,
            Cmd::ErrorDecay => Command::ErrorDecay,
            Cmd::AlphaSweep => Command::AlphaSweep,
            Cmd::Gram => Command::Gram,
        }
    }
}

/// Fractional Fourier inverse polynomial reconstruction experiments.
///
/// List-valued flags take comma-separated values; angles accept multiples of
/// pi such as `pi/4` or `3pi/16`. Flags override fields of the config file.
#[derive(Debug, Parser)]
#[command(name = "frft-iprm", version)]
struct Cli {
    command: Cmd,

    /// JSON run configuration
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long, value_delimiter = ',', value_parser = parse_angle_arg)]
    alpha: Option<Vec<f64>>,

    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,

    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,

    /// Fourier modes per polynomial degree, N = n_ratio * m
    #[arg(long)]
    n_ratio: Option<usize>,

    /// Explicit truncation orders (gram)
    #[arg(long = "big-n", value_delimiter = ',')]
    big_n: Option<Vec<usize>>,

    /// Coefficient quadrature order
    #[arg(long)]
    quad_order: Option<usize>,

    /// Test functions, e.g. f1,f4
    #[arg(long, value_delimiter = ',')]
    functions: Option<Vec<String>>,

    /// Skip the dense-grid evaluation file (reconstruct)
    #[arg(long)]
    no_grid: bool,

    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_angle_arg(s: &str) -> std::result::Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<()> {
    let command = Command::from(cli.command);
    let file = match &cli.config {
        Some(p) => RunConfig::from_file(p).with_context(|| format!("reading config {}", p.display()))?,
        None => RunConfig::default(),
    };
    let flags = RunConfig {
        command: Some(command),
        alpha: cli.alpha.map(|v| v.into_iter().map(Angle).collect()),
        lambda: cli.lambda,
        m: cli.m,
        n_ratio: cli.n_ratio,
        big_n: cli.big_n,
        quad_order: cli.quad_order,
        functions: cli.functions,
        out: cli.out,
        seed: None,
        dense_grid: cli.no_grid.then_some(false),
    };
    let config = file.overridden_by(flags);
    let out = config.out.clone().unwrap_or_else(|| PathBuf::from("results"));
    let files = experiments::run(command, &config, &out).with_context(|| format!("{command} failed"))?;
    for f in files {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
