//! Trajectory files: a sample CSV plus a JSON sidecar with run metadata.
//!
//! CSV columns are `t,x,y,z,omega_x,omega_z,cycle_index`; every number is
//! written with nine significant digits.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{BlochState, EngineParams, NoiseSpec, Sample, Trajectory};
use crate::error::{Error, Result};
use crate::format::{ser_vec, sig9};

pub const CSV_HEADER: [&str; 7] = ["t", "x", "y", "z", "omega_x", "omega_z", "cycle_index"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub params: EngineParams,
    pub noise: NoiseSpec,
    pub seed: u64,
    #[serde(serialize_with = "ser_vec")]
    pub cycle_work: Vec<f64>,
    #[serde(serialize_with = "ser_vec")]
    pub final_state: Vec<f64>,
}

impl TrajectoryMeta {
    pub fn of(tr: &Trajectory) -> Self {
        Self {
            params: tr.params,
            noise: tr.noise,
            seed: tr.seed,
            cycle_work: tr.cycle_work.clone(),
            final_state: vec![tr.final_state.x, tr.final_state.y, tr.final_state.z],
        }
    }
}

pub fn write_csv<W: Write>(tr: &Trajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for (s, c) in tr.samples.iter().zip(tr.cycle_indices()) {
        w.write_record([
            sig9(s.t),
            sig9(s.x),
            sig9(s.y),
            sig9(s.z),
            sig9(s.omega_x),
            sig9(s.omega_z),
            c.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses samples and cycle marks from the CSV layout written by [`write_csv`].
pub fn read_csv<R: Read>(input: R, origin: &Path) -> Result<(Vec<Sample>, Vec<usize>)> {
    let bad = |reason: String| Error::Parse {
        path: origin.to_path_buf(),
        reason,
    };
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(bad(format!("unexpected header {:?}", header)));
    }
    let mut samples = Vec::new();
    let mut marks = Vec::new();
    let mut last_cycle: Option<usize> = None;
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|e| bad(format!("row {}: column {}: {e}", line + 2, CSV_HEADER[i])))
        };
        let sample = Sample {
            t: num(0)?,
            x: num(1)?,
            y: num(2)?,
            z: num(3)?,
            omega_x: num(4)?,
            omega_z: num(5)?,
        };
        let cycle: usize = rec[6]
            .parse()
            .map_err(|e| bad(format!("row {}: cycle_index: {e}", line + 2)))?;
        if last_cycle != Some(cycle) {
            marks.push(samples.len());
            last_cycle = Some(cycle);
        }
        samples.push(sample);
    }
    Ok((samples, marks))
}

pub fn paths(dir: &Path, stem: &str) -> (PathBuf, PathBuf) {
    (
        dir.join(format!("{stem}.csv")),
        dir.join(format!("{stem}.json")),
    )
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`.
pub fn save(tr: &Trajectory, dir: &Path, stem: &str) -> Result<()> {
    let (csv_path, json_path) = paths(dir, stem);
    let mut buf = Vec::with_capacity(tr.samples.len() * 80);
    write_csv(tr, &mut buf)?;
    crate::write_atomic(&csv_path, &buf)?;
    let json = serde_json::to_vec_pretty(&TrajectoryMeta::of(tr))?;
    crate::write_atomic(&json_path, &json)?;
    Ok(())
}

pub fn load(dir: &Path, stem: &str) -> Result<Trajectory> {
    let (csv_path, json_path) = paths(dir, stem);
    let meta: TrajectoryMeta = serde_json::from_slice(&fs::read(&json_path)?)?;
    let (samples, cycle_marks) = read_csv(fs::File::open(&csv_path)?, &csv_path)?;
    if meta.final_state.len() != 3 {
        return Err(Error::Parse {
            path: json_path,
            reason: "final_state must have 3 components".into(),
        });
    }
    Ok(Trajectory {
        samples,
        cycle_marks,
        cycle_work: meta.cycle_work,
        final_state: BlochState::new(
            meta.final_state[0],
            meta.final_state[1],
            meta.final_state[2],
        ),
        seed: meta.seed,
        noise: meta.noise,
        params: meta.params,
    })
}
