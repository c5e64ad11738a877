//! Experiment orchestration: configuration, (sampler × seed) runs, result
//! files, and shrinkage-path sweeps.

mod config;
mod output;
mod run;

pub use config::{
    DataSource, ExperimentConfig, ExperimentKind, ExperimentSpec, SamplerSection, SpikeSource,
    TargetSpec, DEFAULT_BRIDGE_Q, DEFAULT_BURN_IN, DEFAULT_COUPLING, DEFAULT_FIRING_RATES,
    DEFAULT_NUM_ITER, DEFAULT_N_BINS, DEFAULT_SHRINKAGE,
};
pub use output::{
    draws_file_name, draws_header, read_draws, report_file_name, write_draws, write_json,
    write_summary, CellStatus, DrawsTable, Manifest, SummaryRow, MAX_COV_DIM,
};
pub use run::{
    build_problem, regression_data, run_experiment, shrinkage_path, CellOutcome, PathPoint,
    Problem, RunOutcome, MANIFEST_FILE, PATH_FILE, RESOLVED_CONFIG_FILE, SUMMARY_FILE,
};
