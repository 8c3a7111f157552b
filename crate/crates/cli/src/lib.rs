//! Experiment runner for `feat-core`: sweep configs, figure presets and
//! per-instance traces.

pub mod config;
pub mod figures;
pub mod sweep;

pub use config::{Axis, ConfigError, Overrides, Strategy, SweepConfig};
pub use figures::{find_preset, presets, run_figures, Metric, Preset};
pub use sweep::{draw_seed, run_sweep, to_csv_string, write_csv, SweepRow, SweepTable};
