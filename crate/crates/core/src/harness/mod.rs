//! Experiment driver: builds each scenario, runs the full transmit, channel
//! and receive chain per burst, and tabulates the sync-mode comparison.

mod config;
mod report;
mod run;

pub use config::{default_config, Antenna, Scenario, ScenarioConfig, SimConfig, SyncMode};
pub use report::{
    emit_report, load_report_json, ComparisonRow, ComparisonTable, MatrixReport, OutputFormat,
};
pub use run::{
    burst_seed, receiver_config, run_burst, run_burst_with, run_matrix, run_scenario,
    scenario_configs, BurstOutcome, CellResult, MatrixFilter, MatrixResult, OscillatorOverride,
    GUARD_SAMPLES,
};
