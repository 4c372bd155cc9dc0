//! Experiment runner: configs, presets, the training loop and its outputs.

mod compare;
mod config;
mod manifest;
mod presets;
mod run;
mod trace;
pub mod verify;

pub use compare::{compare_runs, Comparison};
pub use config::{problem_id, LrSpec, OptimizerSpec, PolarBackend, PolarSpec, RankRule, RunConfig};
pub use manifest::{artifact_version, Manifest, MANIFEST_SCHEMA};
pub use presets::{
    preset, preset_names, preset_seeds, COMPLETION_DESK_LR_SCALE, DESK_PREFIX, LOGISTIC_DESK_LR_SCALE,
    PRESET_SEEDS, QUAD_DESK_LR_SCALE, SIGN_DESCENT_LR,
};
pub use run::{load_run, run, run_experiment, run_stem, Halt, RunArtifacts, RunOutput, RunSummary, DESCENT_SLACK};
pub use trace::{
    parse_trace, read_trace_file, strip_wall_clock, trace_to_string, write_trace, write_trace_file, Metric,
    TraceRecord, TRACE_COLUMNS, TRACE_SCHEMA,
};
