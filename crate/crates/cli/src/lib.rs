//! Command-line front end: JSON-configured sweeps, comparison with
//! measured data and CSV output.

// `!(x > 0.0)` is used throughout so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compare;
pub mod config;
pub mod error;
pub mod output;
pub mod repulsion;
pub mod run;

pub use config::{RunConfig, Scenario};
pub use error::CliError;
