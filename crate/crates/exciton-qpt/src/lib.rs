//! Command-line companion to `exciton-qpt-core`: JSON run configs, CSV/JSON
//! signal and χ(T) files, and parallel ensemble averaging.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod formats;
pub mod parallel;
pub mod pipeline;

pub use config::{Resolved, RunConfig, CONFIG_SCHEMA};
pub use error::{AppError, Result};
pub use exciton_qpt_core as core;
