use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::data::Dataset;
use super::logreg::{logreg_train, LogRegConfig, LogRegModel};
use super::metrics::{roc_auc, RocPoint};
use crate::error::{domain, Result};

/// Anything that scores a feature vector; higher means more likely degraded.
pub trait Scorer {
    fn score(&self, features: &[f64]) -> Result<f64>;
}

/// Fits a scorer on a training split.
pub trait Trainer {
    type Model: Scorer;
    fn fit(&self, train: &Dataset) -> Result<Self::Model>;
}

impl Scorer for LogRegModel {
    fn score(&self, features: &[f64]) -> Result<f64> {
        self.predict(features)
    }
}

impl Trainer for LogRegConfig {
    type Model = LogRegModel;
    fn fit(&self, train: &Dataset) -> Result<LogRegModel> {
        logreg_train(train, self)
    }
}

/// Fold id for every row. Each class is shuffled on its own and dealt round-robin,
/// so every fold gets floor or ceil of that class's share.
pub fn stratified_folds(labels: &[u8], k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return domain(format!("need at least 2 folds, got {k}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold = vec![0; labels.len()];
    let mut offset = 0;
    for class in [0u8, 1] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if idx.len() < k {
            return domain(format!(
                "class {class} has {} rows, fewer than {k} folds",
                idx.len()
            ));
        }
        idx.shuffle(&mut rng);
        for (j, &i) in idx.iter().enumerate() {
            fold[i] = (offset + j) % k;
        }
        // continue the deal where the previous class stopped to even out fold sizes
        offset = (offset + idx.len()) % k;
    }
    Ok(fold)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    pub per_fold_auc: Vec<f64>,
    pub mean_auc: f64,
    /// ROC of the first fold.
    pub roc: Vec<RocPoint>,
}

/// Generic driver: `score_fold(train_idx, test_idx)` returns scores for the test rows in order.
pub fn cross_validate<F>(labels: &[u8], k: usize, seed: u64, mut score_fold: F) -> Result<CvReport>
where
    F: FnMut(&[usize], &[usize]) -> Result<Vec<f64>>,
{
    let folds = stratified_folds(labels, k, seed)?;
    let mut per_fold_auc = Vec::with_capacity(k);
    let mut roc = Vec::new();
    for f in 0..k {
        let (test, train): (Vec<usize>, Vec<usize>) =
            (0..labels.len()).partition(|&i| folds[i] == f);
        let scores = score_fold(&train, &test)?;
        let test_labels: Vec<u8> = test.iter().map(|&i| labels[i]).collect();
        let curve = roc_auc(&scores, &test_labels)?;
        if f == 0 {
            roc = curve.points;
        }
        per_fold_auc.push(curve.auc);
    }
    let mean_auc = per_fold_auc.iter().sum::<f64>() / k as f64;
    Ok(CvReport {
        per_fold_auc,
        mean_auc,
        roc,
    })
}

/// Stratified k-fold AUC of a trainer on a fixed feature table.
pub fn kfold_cv<T: Trainer>(data: &Dataset, k: usize, seed: u64, trainer: &T) -> Result<CvReport> {
    cross_validate(&data.labels(), k, seed, |train, test| {
        let model = trainer.fit(&data.subset(train)?)?;
        test.iter()
            .map(|&i| model.score(&data.rows()[i].features))
            .collect()
    })
}
