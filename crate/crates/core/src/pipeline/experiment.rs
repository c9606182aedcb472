use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::features::{fold_features, FeatureSource, Method};
use super::seeds::{derive_seed, Stream};
use crate::engine::NoiseModel;
use crate::error::{Error, Result};
use crate::mlkit::{cross_validate, logreg_train, Dataset, RocPoint, Row};
use crate::write_atomic;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub method: Method,
    pub model: NoiseModel,
    #[serde(serialize_with = "crate::format::ser_vec")]
    pub per_fold_auc: Vec<f64>,
    #[serde(serialize_with = "crate::format::ser_f64")]
    pub mean_auc: f64,
    /// ROC of the first fold, a single representative split.
    pub roc: Vec<RocPoint>,
}

impl MetricsReport {
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
    }
}

fn rows(features: Vec<Vec<f64>>, idx: &[usize], labels: &[u8], amplitudes: &[f64]) -> Vec<Row> {
    features
        .into_iter()
        .zip(idx)
        .map(|(f, &i)| Row {
            features: f,
            label: labels[i],
            amplitude: amplitudes[i],
        })
        .collect()
}

/// Stratified k-fold logistic regression on one feature method.
/// Vectorization ranges and standardization are refit inside every fold.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    method: Method,
    labels: &[u8],
    amplitudes: &[f64],
    source: FeatureSource<'_>,
) -> Result<MetricsReport> {
    if labels.len() != source.len() || amplitudes.len() != source.len() {
        return Err(Error::DimensionMismatch {
            expected: source.len(),
            actual: labels.len().min(amplitudes.len()),
        });
    }
    let fold_seed = derive_seed(cfg.master_seed, Stream::Folds, 0);
    let report = cross_validate(labels, cfg.cv_folds, fold_seed, |train, test| {
        let (x_train, x_test) = fold_features(method, source, train, test, cfg)?;
        let model = logreg_train(
            &Dataset::new(rows(x_train, train, labels, amplitudes))?,
            &cfg.logreg,
        )?;
        x_test.iter().map(|f| model.predict(f)).collect()
    })?;
    Ok(MetricsReport {
        method,
        model: cfg.model,
        per_fold_auc: report.per_fold_auc,
        mean_auc: report.mean_auc,
        roc: report.roc,
    })
}
