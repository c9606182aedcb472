//! On-disk stages: dataset → featurize → evaluate → report.
//!
//! Layout under a results root:
//!
//! ```text
//! reference/reference.{csv,json}
//! <model>/manifest.json
//! <model>/trajectories/traj_NNNNN.{csv,json}
//! <model>/diagrams/traj_NNNNN.csv
//! <model>/ssm.csv
//! <model>/features_<method>.csv
//! <model>/metrics_<method>.json
//! table_i.csv, pearson_heatmap.csv, qi_sweep.csv
//! ```

use std::io::BufReader;
use std::path::{Path, PathBuf};

use super::dataset::{trajectory_stem, GeneratedDataset, Manifest};
use super::experiment::{run_experiment, MetricsReport};
use super::features::{extract_diagram, fold_features, ssm_row, FeatureSource, Method};
use super::parallel::par_map;
use crate::engine::NoiseModel;
use crate::error::{Error, Result};
use crate::format::sig9;
use crate::mlkit::{pearson_pixel_map, PixelCorrelationMap};
use crate::ssm::SsmFeatures;
use crate::tda::PersistenceDiagram;
use crate::vectorize::{persistence_image, ImageGrid};
use crate::write_atomic;

pub const DIAGRAM_DIR: &str = "diagrams";
pub const SSM_FILE: &str = "ssm.csv";
pub const TABLE_FILE: &str = "table_i.csv";
pub const HEATMAP_FILE: &str = "pearson_heatmap.csv";
pub const SWEEP_FILE: &str = "qi_sweep.csv";
pub const REFERENCE_DIR: &str = "reference";

pub fn model_dir(root: &Path, model: NoiseModel) -> PathBuf {
    root.join(model.name())
}

pub fn metrics_path(dir: &Path, method: Method) -> PathBuf {
    dir.join(format!("metrics_{method}.json"))
}

pub fn features_path(dir: &Path, method: Method) -> PathBuf {
    dir.join(format!("features_{method}.csv"))
}

fn diagram_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(DIAGRAM_DIR)
        .join(format!("{}.csv", trajectory_stem(index)))
}

/// Rips diagrams for every stored trajectory, written to `diagrams/`.
pub fn compute_diagrams(dir: &Path, data: &GeneratedDataset) -> Result<Vec<PersistenceDiagram>> {
    let cfg = &data.manifest.config;
    let jobs: Vec<usize> = (0..data.trajectories.len()).collect();
    par_map(&jobs, |&i| {
        let d = extract_diagram(&data.trajectories[i].observable(), &cfg.embed, &cfg.tda)?;
        let mut buf = Vec::new();
        d.write_csv(&mut buf)?;
        write_atomic(&diagram_path(dir, data.manifest.records[i].index), &buf)?;
        Ok(d)
    })
}

pub fn load_diagrams(dir: &Path, manifest: &Manifest) -> Result<Vec<PersistenceDiagram>> {
    par_map(&manifest.records, |r| {
        let path = diagram_path(dir, r.index);
        let file = std::fs::File::open(&path).map_err(|e| Error::Parse {
            path: path.clone(),
            reason: format!("{e}; run `featurize` first"),
        })?;
        PersistenceDiagram::read_csv(BufReader::new(file), &path)
    })
}

pub fn compute_ssm(dir: &Path, data: &GeneratedDataset) -> Result<Vec<Vec<f64>>> {
    let table = par_map(&data.trajectories, |t| ssm_row(&t.observable()))?;
    write_table(
        &dir.join(SSM_FILE),
        &data.manifest,
        &SsmFeatures::NAMES.map(String::from),
        &table,
    )?;
    Ok(table)
}

pub fn load_ssm(dir: &Path, manifest: &Manifest) -> Result<Vec<Vec<f64>>> {
    let path = dir.join(SSM_FILE);
    let bad = |reason: String| Error::Parse {
        path: path.clone(),
        reason,
    };
    let mut reader = csv::Reader::from_path(&path)
        .map_err(|e| bad(format!("{e}; run `featurize --method ssm` first")))?;
    let mut table = Vec::with_capacity(manifest.records.len());
    for rec in reader.records() {
        let rec = rec?;
        let values: Vec<f64> = rec
            .iter()
            .skip(2)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| bad(format!("bad number `{v}`: {e}")))
            })
            .collect::<Result<_>>()?;
        if values.len() != SsmFeatures::NAMES.len() {
            return Err(bad(format!(
                "expected {} features, got {}",
                SsmFeatures::NAMES.len(),
                values.len()
            )));
        }
        table.push(values);
    }
    if table.len() != manifest.records.len() {
        return Err(bad(format!(
            "{} rows for {} trajectories",
            table.len(),
            manifest.records.len()
        )));
    }
    Ok(table)
}

/// `label,amplitude,<features…>` with nine significant digits.
fn write_table(
    path: &Path,
    manifest: &Manifest,
    names: &[String],
    table: &[Vec<f64>],
) -> Result<()> {
    let mut out = String::from("label,amplitude");
    for n in names {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    for (r, row) in manifest.records.iter().zip(table) {
        out.push_str(&format!("{},{}", r.label, sig9(r.amplitude)));
        for v in row {
            out.push(',');
            out.push_str(&sig9(*v));
        }
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// Computes the inputs `method` needs and writes a flat feature table.
/// The exported table is vectorized over the whole dataset for inspection;
/// evaluation refits ranges per fold from the stored diagrams.
pub fn featurize(dir: &Path, method: Method) -> Result<PathBuf> {
    let data = GeneratedDataset::load(dir)?;
    let cfg = &data.manifest.config;
    let all: Vec<usize> = (0..data.trajectories.len()).collect();
    let (names, table) = match method {
        Method::Ssm => (
            SsmFeatures::NAMES.map(String::from).to_vec(),
            compute_ssm(dir, &data)?,
        ),
        _ => {
            let diagrams = compute_diagrams(dir, &data)?;
            let (table, _) =
                fold_features(method, FeatureSource::Diagrams(&diagrams), &all, &[], cfg)?;
            let names = match method {
                Method::TemImage => (0..cfg.image.rows)
                    .flat_map(|r| (0..cfg.image.cols).map(move |c| format!("px_{r}_{c}")))
                    .collect(),
                _ => (0..cfg.silhouette_grid)
                    .map(|i| format!("sil_{i}"))
                    .collect(),
            };
            (names, table)
        }
    };
    let path = features_path(dir, method);
    write_table(&path, &data.manifest, &names, &table)?;
    Ok(path)
}

/// Cross-validates `method` on a featurized dataset; `folds` overrides the stored fold count.
pub fn evaluate(dir: &Path, method: Method, folds: Option<usize>) -> Result<MetricsReport> {
    let manifest = Manifest::load(dir)?;
    let mut cfg = manifest.config.clone();
    if let Some(k) = folds {
        cfg.cv_folds = k;
    }
    cfg.validate()?;
    let cfg = &cfg;
    let (labels, amps) = (manifest.labels(), manifest.amplitudes());
    let report = if method == Method::Ssm {
        let table = load_ssm(dir, &manifest)?;
        run_experiment(cfg, method, &labels, &amps, FeatureSource::Table(&table))?
    } else {
        let diagrams = load_diagrams(dir, &manifest)?;
        run_experiment(
            cfg,
            method,
            &labels,
            &amps,
            FeatureSource::Diagrams(&diagrams),
        )?
    };
    report.save(&metrics_path(dir, method))?;
    Ok(report)
}

/// Per-pixel correlation of persistence images with amplitude over one ensemble,
/// using a grid fit to all of its diagrams.
pub fn amplitude_heatmap(
    diagrams: &[PersistenceDiagram],
    amplitudes: &[f64],
    image: &super::config::ImageConfig,
) -> Result<PixelCorrelationMap> {
    let grid = ImageGrid::fit(diagrams, image.rows, image.cols, image.sigma)?;
    let images = diagrams
        .iter()
        .map(|d| persistence_image(d, &grid, image.weight))
        .collect::<Result<Vec<_>>>()?;
    pearson_pixel_map(&images, amplitudes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// `(model, [ssm, tem_image, tem_silhouette])` mean AUCs.
    pub table: Vec<(NoiseModel, [f64; 3])>,
    pub heatmap: PixelCorrelationMap,
}

pub const TABLE_COLUMNS: [Method; 3] = [Method::Ssm, Method::TemImage, Method::TemSilhouette];

pub fn table_csv(table: &[(NoiseModel, [f64; 3])]) -> String {
    let mut out = String::from("model,ssm,tem_image,tem_silhouette\n");
    for (m, aucs) in table {
        out.push_str(&format!(
            "{},{},{},{}\n",
            m.name(),
            sig9(aucs[0]),
            sig9(aucs[1]),
            sig9(aucs[2])
        ));
    }
    out
}

/// Collects every model × method metrics file into the AUC table and renders the
/// jitter heatmap. Lists every absent input when anything is missing.
pub fn emit_report(root: &Path) -> Result<Report> {
    let mut missing = Vec::new();
    let mut table = Vec::new();
    for model in NoiseModel::DEGRADATIONS {
        let dir = model_dir(root, model);
        let mut aucs = [f64::NAN; 3];
        for (slot, method) in aucs.iter_mut().zip(TABLE_COLUMNS) {
            let path = metrics_path(&dir, method);
            if path.exists() {
                *slot = MetricsReport::load(&path)?.mean_auc;
            } else {
                missing.push(format!("{}/{}", model.name(), method));
            }
        }
        table.push((model, aucs));
    }
    let jitter = model_dir(root, NoiseModel::TimingJitter);
    let loaded = Manifest::load(&jitter).and_then(|m| Ok((load_diagrams(&jitter, &m)?, m)));
    if loaded.is_err() {
        missing.push("jitter/diagrams".to_string());
    }
    if !missing.is_empty() {
        return Err(Error::MissingResults(missing));
    }
    let (diagrams, manifest) = loaded?;
    let heatmap = amplitude_heatmap(&diagrams, &manifest.amplitudes(), &manifest.config.image)?;
    write_atomic(&root.join(TABLE_FILE), table_csv(&table).as_bytes())?;
    write_atomic(&root.join(HEATMAP_FILE), heatmap.to_csv().as_bytes())?;
    Ok(Report { table, heatmap })
}
