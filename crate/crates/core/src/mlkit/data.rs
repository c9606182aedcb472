use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// One labelled example: 0 is nominal, 1 degraded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub features: Vec<f64>,
    pub label: u8,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    rows: Vec<Row>,
    feature_dim: usize,
}

impl Dataset {
    pub fn new(rows: Vec<Row>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return domain("dataset must contain at least one row");
        };
        let feature_dim = first.features.len();
        for (i, r) in rows.iter().enumerate() {
            if r.features.len() != feature_dim {
                return Err(Error::DimensionMismatch {
                    expected: feature_dim,
                    actual: r.features.len(),
                });
            }
            if r.label > 1 {
                return domain(format!("row {i}: label must be 0 or 1, got {}", r.label));
            }
        }
        Ok(Self { rows, feature_dim })
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn labels(&self) -> Vec<u8> {
        self.rows.iter().map(|r| r.label).collect()
    }

    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.rows.iter().filter(|r| r.label == 1).count();
        (self.rows.len() - pos, pos)
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| self.rows[i].clone()).collect())
    }
}

/// Per-feature z-score transform learned from a training split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
    /// Features with zero training variance; their scale is 1.
    pub degenerate: Vec<bool>,
}

impl Standardization {
    pub fn transform(&self, features: &[f64]) -> Result<Vec<f64>> {
        if features.len() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                actual: features.len(),
            });
        }
        Ok(features
            .iter()
            .zip(&self.mean)
            .zip(&self.scale)
            .map(|((x, m), s)| (x - m) / s)
            .collect())
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Population mean and standard deviation of every feature column.
pub fn standardize_fit(train: &Dataset) -> Result<Standardization> {
    if train.is_empty() {
        return domain("cannot standardize an empty dataset");
    }
    let n = train.len() as f64;
    let d = train.feature_dim();
    let mut mean = vec![0.0; d];
    for r in train.rows() {
        for (m, x) in mean.iter_mut().zip(&r.features) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; d];
    for r in train.rows() {
        for ((v, x), m) in var.iter_mut().zip(&r.features).zip(&mean) {
            *v += (x - m) * (x - m);
        }
    }
    let mut scale = Vec::with_capacity(d);
    // summation rounding leaves ~1e-17 spread on constant columns
    const FLAT_TOLERANCE: f64 = 1e-12;
    let mut degenerate = Vec::with_capacity(d);
    for (v, m) in var.into_iter().zip(&mean) {
        let sd = (v / n).sqrt();
        let flat = !(sd > FLAT_TOLERANCE * m.abs().max(1.0));
        degenerate.push(flat);
        scale.push(if flat { 1.0 } else { sd });
    }
    Ok(Standardization {
        mean,
        scale,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(col: &[f64]) -> Dataset {
        Dataset::new(
            col.iter()
                .map(|&x| Row {
                    features: vec![x],
                    label: 0,
                    amplitude: 0.0,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn constant_column_is_flagged() {
        let s = standardize_fit(&ds(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!((s.mean[0], s.scale[0], s.degenerate[0]), (1.0, 1.0, true));
    }

    #[test]
    fn population_scale() {
        let s = standardize_fit(&ds(&[0.0, 2.0])).unwrap();
        assert_eq!((s.mean[0], s.scale[0], s.degenerate[0]), (1.0, 1.0, false));
    }

    #[test]
    fn fit_transform_is_zscore() {
        let data = ds(&[3.0, -1.0, 4.0, 1.5, 9.0]);
        let s = standardize_fit(&data).unwrap();
        let z: Vec<f64> = data
            .rows()
            .iter()
            .map(|r| s.transform(&r.features).unwrap()[0])
            .collect();
        let mean = z.iter().sum::<f64>() / z.len() as f64;
        let var = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / z.len() as f64;
        assert!(mean.abs() < 1e-12 && (var - 1.0).abs() < 1e-12);
        assert!(s.transform(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn dataset_validation() {
        assert!(Dataset::new(vec![]).is_err());
        let bad = vec![
            Row {
                features: vec![1.0],
                label: 0,
                amplitude: 0.0,
            },
            Row {
                features: vec![1.0, 2.0],
                label: 1,
                amplitude: 0.0,
            },
        ];
        assert!(Dataset::new(bad).is_err());
        assert!(Dataset::new(vec![Row {
            features: vec![1.0],
            label: 2,
            amplitude: 0.0
        }])
        .is_err());
    }
}
