//! Experiment runner for the `risnoma` simulator: a flat text config
//! format, figure presets and a CSV writer.

pub mod error;
pub mod experiment;
pub mod presets;
pub mod runner;

pub use error::{CliError, Result};
pub use experiment::{Experiment, Params, ScenarioKind, Sweep, SweepPoint, SweepVar, Variant};
pub use presets::{preset, NAMES};
pub use runner::{render_csv, run_experiment, run_to_file, write_csv, Row, CSV_COLUMNS};
