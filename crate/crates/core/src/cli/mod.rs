//! Configuration, grid sampling and the commands behind the binary.

mod commands;
mod config;
mod grid;

pub use commands::{cmd_limits, cmd_presets, cmd_sample, cmd_validate, LimitsReport};
pub use config::{parse_config, Axis, Format, GridSpec, RunConfig, SourceKind, PRESETS};
pub use grid::{FieldGrid, GridRow, COLUMNS};
