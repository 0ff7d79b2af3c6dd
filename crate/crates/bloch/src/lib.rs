//! Command-line front end for `bloch-core`: JSON, CSV and SVG output, and
//! parallel Monte-Carlo runs whose results do not depend on the thread count.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod json;
pub mod parallel;
pub mod render;

pub use cli::run;
pub use error::{CliError, Result};
