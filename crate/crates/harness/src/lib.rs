//! Monte Carlo experiment harness for the channel estimators in `ddchan-core`:
//! configuration files, presets, seeded sweeps, CSV output and SVG plots.

pub mod config;
pub mod diag;
pub mod error;
pub mod output;
pub mod plot;
pub mod presets;
pub mod sweep;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
pub use sweep::{run_sweep, summarize, Row, Summary, SweepResult};
