//! Configuration parsing, experiment dispatch and on-disk outputs.

mod config;
mod report;
mod snapshot;

pub use config::{
    parse_config, serialize_config, ContinuitySection, ConvergenceSection, ExperimentKind, GammaComparisonSection,
    GridSection, NonuniformSection, RunConfig, SnapshotSection, SolverSection, SupportSection,
};
pub use report::{run_experiment, write_report, Manifest};
pub use snapshot::{read_snapshot, write_snapshot, SnapshotMeta};
