//! Refinement studies, diagnostics sweeps and table output for `subdiff-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cases;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod linear_check;
pub mod output;
pub mod study;
pub mod table;

pub use cases::Case;
pub use config::{ExperimentConfig, OutputFormat};
pub use error::{HarnessError, Result};
pub use table::{ConvergenceRow, ConvergenceSeries, ConvergenceTable, StudyKind};
