//! Experiment configuration, sweeps, CSV output, spectra, family configs
//! and D-Wave problem documents.

pub mod config;
pub mod dwave;
pub mod family;
pub mod output;
pub mod spectrum;
pub mod sweep;

pub use config::{DWaveConfig, ExperimentConfig, GateConfig, Grid, HzGrid};
pub use dwave::{emulate_dwave, end_slope_prediction, export_dwave, import_dwave, DWaveEmulation, DWaveProblem};
pub use family::FamilyConfig;
pub use output::{emit_csv, write_csv};
pub use spectrum::{spectrum_report, Level, SpectrumReport};
pub use sweep::{run_sweep, SweepMetadata, SweepResult, SweepRow};
