//! Fixtures shared by the benchmarks.

use otto_tem::engine::{run_trajectory, EngineParams, NoiseModel, NoiseSpec, Trajectory};
use otto_tem::pipeline::{extract_diagram, EmbedConfig, TdaConfig};
use otto_tem::tda::PersistenceDiagram;

/// A machine-learning-window trajectory under moderate timing jitter.
pub fn jitter_trajectory(seed: u64) -> Trajectory {
    let noise = NoiseSpec::new(NoiseModel::TimingJitter, 0.15).expect("valid amplitude");
    run_trajectory(&EngineParams::default(), &noise, 2, 5, seed).expect("simulation")
}

pub fn jitter_diagram(seed: u64) -> PersistenceDiagram {
    extract_diagram(
        &jitter_trajectory(seed).observable(),
        &EmbedConfig::default(),
        &TdaConfig::default(),
    )
    .expect("diagram")
}
