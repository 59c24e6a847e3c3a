//! Test-function corpus, run configuration and the sweep commands behind the
//! `frft-iprm` command-line tool.

pub mod commands;
pub mod config;
pub mod corpus;
pub mod output;

pub use commands::{alpha_sweep, cond_sweep, error_decay, fitted_rate, gram, reconstruct, run};
pub use config::{angle_set, parse_angle, Angle, Command, Resolved, RunConfig, LAMBDA_SWEEP};
pub use corpus::{TestCorpus, TestFunction, CORPUS_VERSION};
pub use output::{format_float, Cell, Table};
