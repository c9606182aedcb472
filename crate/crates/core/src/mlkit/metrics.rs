use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::vectorize::PersistenceImage;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    #[serde(serialize_with = "crate::format::ser_f64")]
    pub fpr: f64,
    #[serde(serialize_with = "crate::format::ser_f64")]
    pub tpr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub auc: f64,
    /// From (0,0) to (1,1), one point per distinct threshold.
    pub points: Vec<RocPoint>,
}

fn check_labels(scores: &[f64], labels: &[u8]) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: scores.len(),
            actual: labels.len(),
        });
    }
    if let Some(s) = scores.iter().find(|s| s.is_nan()) {
        return domain(format!("score is not a number: {s}"));
    }
    if let Some(l) = labels.iter().find(|&&l| l > 1) {
        return domain(format!("labels must be 0 or 1, got {l}"));
    }
    let pos = labels.iter().filter(|&&l| l == 1).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return domain("ROC analysis needs both classes");
    }
    Ok((neg, pos))
}

/// Mann–Whitney AUC with midranks for ties, plus the ROC polyline.
pub fn roc_auc(scores: &[f64], labels: &[u8]) -> Result<RocCurve> {
    let (neg, pos) = check_labels(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        rank_sum_pos += midrank * order[i..=j].iter().filter(|&&k| labels[k] == 1).count() as f64;
        i = j + 1;
    }
    let (np, nn) = (pos as f64, neg as f64);
    let auc = (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);

    // sweep thresholds from high to low
    let mut points = vec![RocPoint { fpr: 0.0, tpr: 0.0 }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut k = order.len();
    while k > 0 {
        let s = scores[order[k - 1]];
        while k > 0 && scores[order[k - 1]] == s {
            if labels[order[k - 1]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            k -= 1;
        }
        points.push(RocPoint {
            fpr: fp as f64 / nn,
            tpr: tp as f64 / np,
        });
    }
    Ok(RocCurve { auc, points })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub r: f64,
    /// Set when either input is constant; r is then 0.
    pub degenerate: bool,
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<Correlation> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            actual: ys.len(),
        });
    }
    if xs.len() < 2 {
        return domain("correlation needs at least two observations");
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    // constant inputs leave only rounding residue in the sums of squares
    let flat = |ss: f64, m: f64| ss.sqrt() <= 1e-12 * n.sqrt() * m.abs().max(1.0);
    if flat(sxx, mx) || flat(syy, my) {
        return Ok(Correlation {
            r: 0.0,
            degenerate: true,
        });
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    Ok(Correlation {
        r,
        degenerate: false,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PixelCorrelationMap {
    pub rows: usize,
    pub cols: usize,
    /// Row-major, same layout as the persistence images.
    pub values: Vec<f64>,
}

impl PixelCorrelationMap {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    /// One line per grid row, comma separated, nine significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.values.chunks(self.cols) {
            let line: Vec<String> = row.iter().map(|&v| crate::format::sig9(v)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Correlation of every pixel with the noise amplitude across an ensemble.
pub fn pearson_pixel_map(
    images: &[PersistenceImage],
    amplitudes: &[f64],
) -> Result<PixelCorrelationMap> {
    if images.len() != amplitudes.len() {
        return Err(Error::DimensionMismatch {
            expected: images.len(),
            actual: amplitudes.len(),
        });
    }
    let Some(first) = images.first() else {
        return domain("pixel map needs at least one image");
    };
    if images.iter().any(|im| im.grid != first.grid) {
        return domain("all images must share one grid");
    }
    let mut column = vec![0.0; images.len()];
    let mut values = Vec::with_capacity(first.pixels.len());
    for p in 0..first.pixels.len() {
        for (c, im) in column.iter_mut().zip(images) {
            *c = im.pixels[p];
        }
        values.push(pearson(&column, amplitudes)?.r);
    }
    Ok(PixelCorrelationMap {
        rows: first.grid.rows,
        cols: first.grid.cols,
        values,
    })
}
