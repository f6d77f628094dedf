//! Command-line front end for `proprep`: instance generation, selection,
//! single audits, grid sweeps and the neighborhood-event benchmark.
//!
//! Exit codes of the binary: 0 when every attached guarantee holds, 2 when a
//! measured value exceeds its guarantee, 1 on any operational error.

pub mod args;
pub mod commands;
pub mod opcount;
pub mod sweep;
mod table;

pub use args::{Cli, Format, CAP_ENV};
pub use commands::{run, Outcome};
pub use opcount::{opcount_bench, OpcountRow};
pub use sweep::{run_sweep, SweepResult, SweepRow, SweepSpec};
