use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, LabelRule};
use super::parallel::par_map;
use super::seeds::{derive_seed, unit_uniform, Stream};
use crate::engine::{io as traj_io, run_trajectory, NoiseSpec, Trajectory};
use crate::error::{Error, Result};
use crate::write_atomic;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const TRAJECTORY_DIR: &str = "trajectories";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub index: usize,
    pub seed: u64,
    #[serde(serialize_with = "crate::format::ser_f64")]
    pub amplitude: f64,
    pub label: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: ExperimentConfig,
    pub records: Vec<TrajectoryRecord>,
}

impl Manifest {
    pub fn labels(&self) -> Vec<u8> {
        self.records.iter().map(|r| r.label).collect()
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.amplitude).collect()
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        write_atomic(&dir.join(MANIFEST_FILE), text.as_bytes())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse {
            path: path.clone(),
            reason: e.to_string(),
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.clone(),
            reason: e.to_string(),
        })
    }
}

pub fn label_for(amplitude: f64, threshold: f64) -> u8 {
    u8::from(amplitude > threshold)
}

/// Amplitudes, seeds and labels for every trajectory, before any simulation.
pub fn plan_dataset(cfg: &ExperimentConfig) -> Result<Manifest> {
    cfg.validate()?;
    let a_max = cfg.amplitude_max();
    let mut records: Vec<TrajectoryRecord> = (0..cfg.n_trajectories)
        .map(|i| {
            let amplitude =
                a_max * unit_uniform(derive_seed(cfg.master_seed, Stream::Amplitude, i as u64));
            TrajectoryRecord {
                index: i,
                seed: derive_seed(cfg.master_seed, Stream::Trajectory, i as u64),
                amplitude,
                label: label_for(amplitude, cfg.threshold()),
            }
        })
        .collect();
    if cfg.label_rule == LabelRule::RandomBalanced {
        let mut order: Vec<usize> = (0..records.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(derive_seed(
            cfg.master_seed,
            Stream::Labels,
            0,
        )));
        let half = records.len() / 2;
        for (k, &i) in order.iter().enumerate() {
            records[i].label = u8::from(k < half);
        }
    }
    Ok(Manifest {
        config: cfg.clone(),
        records,
    })
}

pub fn simulate_record(cfg: &ExperimentConfig, rec: &TrajectoryRecord) -> Result<Trajectory> {
    let noise = NoiseSpec::new(cfg.model, rec.amplitude)?;
    run_trajectory(&cfg.params, &noise, cfg.burn_in, cfg.window, rec.seed)
}

#[derive(Debug, Clone)]
pub struct GeneratedDataset {
    pub manifest: Manifest,
    pub trajectories: Vec<Trajectory>,
}

pub fn generate_dataset(cfg: &ExperimentConfig) -> Result<GeneratedDataset> {
    let manifest = plan_dataset(cfg)?;
    let trajectories = par_map(&manifest.records, |r| simulate_record(cfg, r))?;
    Ok(GeneratedDataset {
        manifest,
        trajectories,
    })
}

pub fn trajectory_stem(index: usize) -> String {
    format!("traj_{index:05}")
}

impl GeneratedDataset {
    pub fn observables(&self) -> Vec<Vec<f64>> {
        self.trajectories
            .iter()
            .map(Trajectory::observable)
            .collect()
    }

    /// Writes the manifest and one CSV + JSON sidecar per trajectory.
    pub fn save(&self, dir: &Path) -> Result<()> {
        let tdir = dir.join(TRAJECTORY_DIR);
        std::fs::create_dir_all(&tdir)?;
        let jobs: Vec<(usize, &Trajectory)> = self.trajectories.iter().enumerate().collect();
        par_map(&jobs, |(i, tr)| {
            traj_io::save(tr, &tdir, &trajectory_stem(*i))
        })?;
        self.manifest.save(dir)
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let manifest = Manifest::load(dir)?;
        let tdir = dir.join(TRAJECTORY_DIR);
        let trajectories = par_map(&manifest.records, |r| {
            traj_io::load(&tdir, &trajectory_stem(r.index))
        })?;
        Ok(Self {
            manifest,
            trajectories,
        })
    }
}
