//! Library half of the `fairwpt` command: configuration parsing and the
//! experiment-matrix runner.

pub mod config;
pub mod matrix;

pub use config::{parse_config, parse_config_str, ConfigError};
pub use matrix::{run_matrix, Combination, ExperimentMatrix, MatrixError, MatrixReport, PAPER_SCHEMES};
