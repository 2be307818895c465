//! Verification harness around `ringspectra-core`: per-instance reports,
//! declarative sweeps, file formats and the command-line front end.

pub mod cli;
mod error;
pub mod export;
pub mod report;
pub mod sweep;

pub use error::{Error, Result};
pub use export::{write_reports_csv, MatrixExport};
pub use report::{count_checks, verify_instance, PolyRecord, SquareCount, VerifyOptions, VerifyReport};
pub use sweep::{run_sweep, CaseCounts, Family, SweepOutcome, SweepPlan, USelector};
