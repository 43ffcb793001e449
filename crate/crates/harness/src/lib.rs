//! Verification harness: run configuration, zero cache, suite runner,
//! reports and the `zerolab` command line.

// `!(x > 0.0)` is used deliberately so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache;
pub mod cli;
pub mod config;
pub mod error;
pub mod report;
pub mod suite;

pub use cli::cli_main;
pub use config::{
    Command, OutputFormat, RunConfig, StatsKind, Tolerances, VerifyKind, XArg, ZeroSourceConfig, ZerosCommand,
};
pub use error::{HarnessError, Result};
pub use report::{numeric_fingerprint, to_json, Report, Verdict};
pub use suite::{run_suite, run_suite_with, SuiteOutput};
