//! Run configuration: a JSON file whose fields can each be overridden from the
//! command line, plus command-specific defaults.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::DEFAULT_N_RATIO;

use super::corpus::TestCorpus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CondSweep,
    Reconstruct,
    ErrorDecay,
    AlphaSweep,
    Gram,
}

impl Command {
    pub const ALL: [Command; 5] =
        [Command::CondSweep, Command::Reconstruct, Command::ErrorDecay, Command::AlphaSweep, Command::Gram];

    pub fn name(&self) -> &'static str {
        match self {
            Command::CondSweep => "cond-sweep",
            Command::Reconstruct => "reconstruct",
            Command::ErrorDecay => "error-decay",
            Command::AlphaSweep => "alpha-sweep",
            Command::Gram => "gram",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown command `{s}`")))
    }
}

/// Parses an angle given as a number or a multiple of pi, e.g. `0.7`,
/// `pi/4`, `3pi/16`, `3*pi/8`, `0.25pi`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let bad = || Error::InvalidParameter(format!("cannot parse angle `{text}`"));
    let Some(pos) = s.find("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };
    let (head, tail) = (&s[..pos], &s[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let numer = match head {
        "" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let denom = match tail {
        "" => 1.0,
        t => t.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(numer * PI / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Angle(pub f64);

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Angle(v)),
            Raw::Text(t) => parse_angle(&t).map(Angle).map_err(serde::de::Error::custom),
        }
    }
}

/// Accepts either a scalar or a list in JSON.
fn one_or_many<'de, D, T>(d: D) -> std::result::Result<Option<Vec<T>>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw<T> {
        One(T),
        Many(Vec<T>),
    }
    Ok(Option::<Raw<T>>::deserialize(d)?.map(|r| match r {
        Raw::One(v) => vec![v],
        Raw::Many(v) => v,
    }))
}

/// Every field optional; unset fields fall back to the command's defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    #[serde(deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Angle>>,
    #[serde(deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    #[serde(deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<usize>>,
    pub n_ratio: Option<usize>,
    /// Explicit truncation orders; overrides `n_ratio * m` where a command
    /// sweeps N (gram).
    #[serde(deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub big_n: Option<Vec<usize>>,
    pub quad_order: Option<usize>,
    #[serde(deserialize_with = "one_or_many", skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    /// Reserved for noise studies; the pipeline is deterministic.
    pub seed: Option<u64>,
    pub dense_grid: Option<bool>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overridden_by(self, flags: RunConfig) -> RunConfig {
        RunConfig {
            command: flags.command.or(self.command),
            alpha: flags.alpha.or(self.alpha),
            lambda: flags.lambda.or(self.lambda),
            m: flags.m.or(self.m),
            n_ratio: flags.n_ratio.or(self.n_ratio),
            big_n: flags.big_n.or(self.big_n),
            quad_order: flags.quad_order.or(self.quad_order),
            functions: flags.functions.or(self.functions),
            out: flags.out.or(self.out),
            seed: flags.seed.or(self.seed),
            dense_grid: flags.dense_grid.or(self.dense_grid),
        }
    }

    /// Applies the defaults of `command` and validates the result.
    pub fn resolve(&self, command: Command) -> Result<Resolved> {
        let quarter = vec![PI / 4.0];
        let (alpha_default, lambda_default, m_default) = match command {
            Command::CondSweep => (quarter, LAMBDA_SWEEP.to_vec(), (1..=8).map(|i| 4 * i).collect()),
            Command::Reconstruct => (quarter, vec![crate::DEFAULT_LAMBDA], vec![16]),
            Command::ErrorDecay => (quarter, vec![crate::DEFAULT_LAMBDA], (1..=8).map(|i| 4 * i).collect()),
            Command::AlphaSweep => (angle_set(), vec![crate::DEFAULT_LAMBDA], vec![8, 16, 24]),
            Command::Gram => (quarter, vec![crate::DEFAULT_LAMBDA], vec![8]),
        };
        let explicit_alpha = self.alpha.is_some();
        let mut alpha: Vec<f64> = match &self.alpha {
            Some(a) => a.iter().map(|a| a.0).collect(),
            None => alpha_default,
        };
        let mut lambda = self.lambda.clone().unwrap_or(lambda_default);
        let mut m = self.m.clone().unwrap_or(m_default);
        let n_ratio = self.n_ratio.unwrap_or(DEFAULT_N_RATIO);
        let mut functions = self
            .functions
            .clone()
            .unwrap_or_else(|| TestCorpus::standard().ids().iter().map(|s| s.to_string()).collect());

        for &a in &alpha {
            if !(a > 0.0 && a <= FRAC_PI_2) {
                return Err(Error::InvalidParameter(format!("alpha = {a} outside (0, pi/2]")));
            }
        }
        for &l in &lambda {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidParameter(format!("lambda = {l} must be positive")));
            }
        }
        if n_ratio == 0 {
            return Err(Error::InvalidParameter("n_ratio must be at least 1".into()));
        }
        if alpha.is_empty() || lambda.is_empty() || m.is_empty() {
            return Err(Error::InvalidParameter("alpha, lambda and m lists must be non-empty".into()));
        }
        if let Some(&bad) = m.iter().find(|&&m| m == 0) {
            return Err(Error::InvalidParameter(format!("m = {bad} must be at least 1")));
        }
        let corpus = TestCorpus::standard();
        for f in &functions {
            corpus.get(f)?;
        }
        if let Some(q) = self.quad_order {
            if q == 0 {
                return Err(Error::InvalidParameter("quad_order must be positive".into()));
            }
        }
        let mut big_n = self.big_n.clone();
        if let Some(ns) = &mut big_n {
            if ns.iter().any(|&n| n == 0) {
                return Err(Error::InvalidParameter("big_n entries must be positive".into()));
            }
            ns.sort_unstable();
            ns.dedup();
        }

        alpha.sort_by(f64::total_cmp);
        alpha.dedup();
        lambda.sort_by(f64::total_cmp);
        lambda.dedup();
        m.sort_unstable();
        m.dedup();
        functions.sort();
        functions.dedup();

        Ok(Resolved {
            command,
            alpha,
            lambda,
            m,
            n_ratio,
            big_n,
            quad_order: self.quad_order,
            functions,
            seed: self.seed,
            dense_grid: self.dense_grid.unwrap_or(true),
            alpha_sweep_default: command == Command::CondSweep && !explicit_alpha,
        })
    }
}

/// Gegenbauer parameters swept for the conditioning study.
pub const LAMBDA_SWEEP: [f64; 5] = [0.5, 0.75, 1.0, 1.5, 2.0];

/// `{pi/16, 2pi/16, ..., 7pi/16}`.
pub fn angle_set() -> Vec<f64> {
    (1..=7).map(|j| j as f64 * PI / 16.0).collect()
}

/// Fully specified parameters of one run, echoed into the metadata file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub command: Command,
    pub alpha: Vec<f64>,
    pub lambda: Vec<f64>,
    pub m: Vec<usize>,
    pub n_ratio: usize,
    pub big_n: Option<Vec<usize>>,
    pub quad_order: Option<usize>,
    pub functions: Vec<String>,
    pub seed: Option<u64>,
    pub dense_grid: bool,
    /// cond-sweep without explicit angles also sweeps the angle set at
    /// `lambda = 0.75`, `m = 16`.
    pub alpha_sweep_default: bool,
}

impl Resolved {
    pub fn big_n_for(&self, m: usize) -> usize {
        self.n_ratio * m
    }
}
