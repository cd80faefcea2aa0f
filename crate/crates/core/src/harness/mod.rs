//! Run configuration, scenario presets, persistent artifacts, and the
//! verification suites behind the `outerpress` CLI.

mod config;
mod pipeline;
mod presets;
mod report;
mod verify;

pub use config::{GridConfig, InitialConfig, OutputConfig, RunConfig, ScheduleConfig, TimeConfig};
pub use pipeline::{
    execute, fit_csv_column, prepare, print_summary, run_pipeline, series_csv, summarize,
    write_artifacts, CliRunOutcome, CsvTable, PreparedRun, RunSummary, CSV_HEADER,
    STATIONARY_TAIL_TOLERANCE,
};
pub use presets::{preset, PRESET_NAMES};
pub use report::render_report;
pub use verify::{print_results, run_suite, CriterionResult, Suite, SUITE_NAMES};
