//! Dataset generation, feature extraction, cross-validated experiments,
//! the QI sweep and report emission.

mod config;
mod dataset;
mod experiment;
mod features;
mod parallel;
mod reference;
pub mod seeds;
pub mod stages;

pub use config::{
    EmbedConfig, ExperimentConfig, ImageConfig, LabelRule, MaxScalePolicy, ReferenceConfig,
    TdaConfig,
};
pub use dataset::{
    generate_dataset, label_for, plan_dataset, simulate_record, trajectory_stem, GeneratedDataset,
    Manifest, TrajectoryRecord, MANIFEST_FILE, TRAJECTORY_DIR,
};
pub use experiment::{run_experiment, MetricsReport};
pub use features::{
    extract_diagram, fold_features, ssm_row, FeatureSource, Method, SSM_SAMPLE_RATE,
};
pub use parallel::{par_map, worker_count, THREADS_ENV};
pub use reference::{
    build_reference, linspace, qi_sweep, sweep_csv, ReferenceDiagram, ReferenceProvenance,
    SweepConfig, SweepRow, SWEEP_HEADER,
};
pub use stages::{emit_report, Report};
