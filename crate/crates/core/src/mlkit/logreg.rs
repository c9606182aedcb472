use serde::{Deserialize, Serialize};

use super::data::{standardize_fit, Dataset, Standardization};
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogRegConfig {
    pub l2: f64,
    pub lr: f64,
    pub epochs: usize,
    /// Unused by the zero-initialized solver; kept so callers can thread a seed through.
    pub seed: u64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        Self {
            l2: 1e-3,
            lr: 0.1,
            epochs: 500,
            seed: 0,
        }
    }
}

impl LogRegConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.l2 >= 0.0 && self.l2.is_finite()) {
            return domain(format!("l2 must be finite and >= 0, got {}", self.l2));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return domain(format!("lr must be finite and > 0, got {}", self.lr));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub standardization: Standardization,
}

impl LogRegModel {
    pub fn decision(&self, features: &[f64]) -> Result<f64> {
        let z = self.standardization.transform(features)?;
        Ok(dot(&self.weights, &z) + self.bias)
    }

    pub fn predict(&self, features: &[f64]) -> Result<f64> {
        Ok(sigmoid(self.decision(features)?))
    }
}

pub fn logreg_predict(model: &LogRegModel, features: &[f64]) -> Result<f64> {
    model.predict(features)
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// ln(1 + e^x) without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Loss and gradient of mean cross-entropy plus (l2/2)|w|^2 over a design matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LossGrad {
    pub loss: f64,
    pub grad_w: Vec<f64>,
    pub grad_b: f64,
}

pub fn loss_and_gradient(x: &[Vec<f64>], y: &[u8], w: &[f64], b: f64, l2: f64) -> Result<LossGrad> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if x.is_empty() {
        return domain("loss needs at least one row");
    }
    let n = x.len() as f64;
    let mut loss = 0.0;
    let mut grad_w = vec![0.0; w.len()];
    let mut grad_b = 0.0;
    for (row, &label) in x.iter().zip(y) {
        if row.len() != w.len() {
            return Err(Error::DimensionMismatch {
                expected: w.len(),
                actual: row.len(),
            });
        }
        let s = dot(w, row) + b;
        let t = f64::from(label);
        // -[t ln σ(s) + (1-t) ln(1-σ(s))] = softplus(s) - t s
        loss += softplus(s) - t * s;
        let r = sigmoid(s) - t;
        grad_b += r;
        for (g, v) in grad_w.iter_mut().zip(row) {
            *g += r * v;
        }
    }
    loss /= n;
    loss += 0.5 * l2 * dot(w, w);
    grad_b /= n;
    for (g, wi) in grad_w.iter_mut().zip(w) {
        *g = *g / n + l2 * wi;
    }
    Ok(LossGrad {
        loss,
        grad_w,
        grad_b,
    })
}

/// Upper bound on the Lipschitz constant of the loss gradient:
/// λmax([Z 1]ᵀ[Z 1] / n) / 4 + l2, with λmax from power iteration.
fn gradient_lipschitz(x: &[Vec<f64>], l2: f64) -> f64 {
    let n = x.len() as f64;
    let d = x[0].len() + 1;
    let mut v = vec![1.0 / (d as f64).sqrt(); d];
    let mut lambda = 0.0;
    for _ in 0..100 {
        let mut next = vec![0.0; d];
        for row in x {
            let s = dot(&v[..d - 1], row) + v[d - 1];
            for (o, r) in next.iter_mut().zip(row) {
                *o += s * r;
            }
            next[d - 1] += s;
        }
        let norm = next.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        let est = norm / n;
        v = next.into_iter().map(|a| a / norm).collect();
        let converged = (est - lambda).abs() <= 1e-6 * est;
        lambda = est;
        if converged {
            break;
        }
    }
    // power iteration approaches λmax from below
    1.05 * lambda / 4.0 + l2
}

/// Per-epoch training loss, recorded alongside the fitted model.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingTrace {
    pub losses: Vec<f64>,
    pub step: f64,
}

pub fn logreg_train(train: &Dataset, cfg: &LogRegConfig) -> Result<LogRegModel> {
    logreg_train_traced(train, cfg).map(|(m, _)| m)
}

/// Full-batch gradient descent from zero. The step is min(lr, 1/L) with L the
/// gradient's Lipschitz bound, which keeps the loss monotone on wide, strongly
/// correlated feature sets where a fixed lr would oscillate.
pub fn logreg_train_traced(
    train: &Dataset,
    cfg: &LogRegConfig,
) -> Result<(LogRegModel, TrainingTrace)> {
    cfg.validate()?;
    let (neg, pos) = train.class_counts();
    if neg == 0 || pos == 0 {
        return domain("training set must contain both classes");
    }
    let standardization = standardize_fit(train)?;
    let x: Vec<Vec<f64>> = train
        .rows()
        .iter()
        .map(|r| standardization.transform(&r.features))
        .collect::<Result<_>>()?;
    let y = train.labels();
    let d = train.feature_dim();
    let step = cfg.lr.min(1.0 / gradient_lipschitz(&x, cfg.l2));
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut losses = Vec::with_capacity(cfg.epochs + 1);
    for _ in 0..cfg.epochs {
        let lg = loss_and_gradient(&x, &y, &w, b, cfg.l2)?;
        losses.push(lg.loss);
        for ((wi, g), &flat) in w
            .iter_mut()
            .zip(&lg.grad_w)
            .zip(&standardization.degenerate)
        {
            if !flat {
                *wi -= step * g;
            }
        }
        b -= step * lg.grad_b;
    }
    losses.push(loss_and_gradient(&x, &y, &w, b, cfg.l2)?.loss);
    Ok((
        LogRegModel {
            weights: w,
            bias: b,
            standardization,
        },
        TrainingTrace { losses, step },
    ))
}
