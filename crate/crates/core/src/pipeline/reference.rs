use std::io::BufReader;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{EmbedConfig, ReferenceConfig, TdaConfig};
use super::features::extract_diagram;
use super::parallel::par_map;
use super::seeds::{derive_seed, Stream};
use crate::engine::{run_trajectory, EngineParams, NoiseModel, NoiseSpec};
use crate::error::{domain, Error, Result};
use crate::format::sig9;
use crate::tda::{quality_index, PersistenceDiagram};
use crate::write_atomic;

pub const REFERENCE_CSV: &str = "reference.csv";
pub const REFERENCE_JSON: &str = "reference.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceProvenance {
    pub params: EngineParams,
    pub seed: u64,
    pub burn_in: usize,
    pub window: usize,
    pub embed: EmbedConfig,
    pub tda: TdaConfig,
}

/// Diagram of the noiseless limit cycle, the baseline for the quality index.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceDiagram {
    pub diagram: PersistenceDiagram,
    pub provenance: ReferenceProvenance,
}

pub fn build_reference(
    p: &EngineParams,
    rc: &ReferenceConfig,
    embed: &EmbedConfig,
    tda: &TdaConfig,
) -> Result<ReferenceDiagram> {
    let tr = run_trajectory(p, &NoiseSpec::none(), rc.burn_in, rc.window, rc.seed)?;
    let diagram = extract_diagram(&tr.observable(), embed, tda)?;
    Ok(ReferenceDiagram {
        diagram,
        provenance: ReferenceProvenance {
            params: *p,
            seed: rc.seed,
            burn_in: rc.burn_in,
            window: rc.window,
            embed: *embed,
            tda: *tda,
        },
    })
}

impl ReferenceDiagram {
    pub fn save(&self, dir: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.diagram.write_csv(&mut buf)?;
        write_atomic(&dir.join(REFERENCE_CSV), &buf)?;
        write_atomic(
            &dir.join(REFERENCE_JSON),
            serde_json::to_string_pretty(&self.provenance)?.as_bytes(),
        )
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let csv_path = dir.join(REFERENCE_CSV);
        let diagram = PersistenceDiagram::read_csv(
            BufReader::new(std::fs::File::open(&csv_path)?),
            &csv_path,
        )?;
        let json_path = dir.join(REFERENCE_JSON);
        let provenance =
            serde_json::from_str(&std::fs::read_to_string(&json_path)?).map_err(|e| {
                Error::Parse {
                    path: json_path,
                    reason: e.to_string(),
                }
            })?;
        Ok(Self {
            diagram,
            provenance,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub model: NoiseModel,
    pub grid: Vec<f64>,
    pub runs_per_point: usize,
    pub burn_in: usize,
    pub window: usize,
    pub master_seed: u64,
}

impl Default for SweepConfig {
    /// 20 jitter amplitudes over [0, 0.25], 5 runs each, long window.
    fn default() -> Self {
        Self {
            model: NoiseModel::TimingJitter,
            grid: linspace(0.0, 0.25, 20),
            runs_per_point: 5,
            burn_in: 15,
            window: 15,
            master_seed: 0,
        }
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub amplitude: f64,
    pub run: usize,
    pub seed: u64,
    pub qi: f64,
    pub wasserstein1: f64,
    pub bottleneck: f64,
    pub work_mean: f64,
    pub work_var: f64,
}

pub const SWEEP_HEADER: &str = "amplitude,run,seed,qi,wasserstein1,bottleneck,work_mean,work_var";

/// QI against the reference and work statistics for every (amplitude, run).
pub fn qi_sweep(
    p: &EngineParams,
    sc: &SweepConfig,
    reference: &ReferenceDiagram,
    embed: &EmbedConfig,
    tda: &TdaConfig,
) -> Result<Vec<SweepRow>> {
    if sc.grid.is_empty() || sc.runs_per_point == 0 {
        return domain("sweep needs a nonempty grid and at least one run per point");
    }
    let a_max = sc.model.default_max_amplitude();
    if let Some(a) = sc.grid.iter().find(|a| !(0.0..=a_max).contains(*a)) {
        return domain(format!("sweep amplitude {a} outside [0, {a_max}]"));
    }
    let jobs: Vec<(usize, f64, usize)> = sc
        .grid
        .iter()
        .enumerate()
        .flat_map(|(g, &a)| (0..sc.runs_per_point).map(move |r| (g, a, r)))
        .collect();
    par_map(&jobs, |&(g, amplitude, run)| {
        let seed = derive_seed(
            sc.master_seed,
            Stream::Sweep,
            (g * sc.runs_per_point + run) as u64,
        );
        let noise = if amplitude > 0.0 {
            NoiseSpec::new(sc.model, amplitude)?
        } else {
            NoiseSpec::none()
        };
        let tr = run_trajectory(p, &noise, sc.burn_in, sc.window, seed)?;
        let d = extract_diagram(&tr.observable(), embed, tda)?;
        let dist = quality_index(&d, &reference.diagram)?;
        let (work_mean, work_var) = tr.work_stats()?;
        Ok(SweepRow {
            amplitude,
            run,
            seed,
            qi: dist.qi,
            wasserstein1: dist.wasserstein1,
            bottleneck: dist.bottleneck,
            work_mean,
            work_var,
        })
    })
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let line = [
            sig9(r.amplitude),
            r.run.to_string(),
            r.seed.to_string(),
            sig9(r.qi),
            sig9(r.wasserstein1),
            sig9(r.bottleneck),
            sig9(r.work_mean),
            sig9(r.work_var),
        ];
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
