//! Configuration loading, command dispatch and report emission.

mod config;
mod model;
mod report;
mod run;

pub use config::{ConfigError, CurveSpec, FieldSpec, Grid, Guards, Params, PointSpec, RunConfig};
pub use model::{Model, ParseElem, Setup};
pub use report::{emit_report, Assertion, Cell, Format, Report, Table};
pub use run::{run_command, Command, RunError};

/// Exit status for usage and configuration errors.
pub const EXIT_CONFIG: i32 = 1;
/// Exit status when a mathematical assertion fails.
pub const EXIT_ASSERTION: i32 = 2;
