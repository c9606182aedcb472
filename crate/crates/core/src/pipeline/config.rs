use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::{EngineParams, NoiseModel};
use crate::error::{domain, Error, Result};
use crate::mlkit::LogRegConfig;
use crate::tda::SubsampleMethod;
use crate::vectorize::PersistenceWeight;

/// How labels are assigned to generated trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelRule {
    /// Degraded iff amplitude > threshold.
    #[default]
    Threshold,
    /// Exactly half the rows labelled degraded, chosen by a seeded shuffle
    /// independent of the trajectories. A no-signal control.
    RandomBalanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbedConfig {
    pub dim: usize,
    pub delay: usize,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        Self { dim: 3, delay: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxScalePolicy {
    /// Half the diameter of each subsampled cloud.
    HalfDiameter,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TdaConfig {
    pub point_budget: usize,
    pub subsample: SubsampleMethod,
    pub max_scale: MaxScalePolicy,
}

impl Default for TdaConfig {
    fn default() -> Self {
        Self {
            point_budget: 400,
            subsample: SubsampleMethod::Stride,
            max_scale: MaxScalePolicy::HalfDiameter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImageConfig {
    pub rows: usize,
    pub cols: usize,
    pub sigma: f64,
    pub weight: PersistenceWeight,
}

impl Default for ImageConfig {
    fn default() -> Self {
        Self {
            rows: 40,
            cols: 40,
            sigma: 0.02,
            weight: PersistenceWeight::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReferenceConfig {
    pub burn_in: usize,
    pub window: usize,
    pub seed: u64,
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        Self {
            burn_in: 15,
            window: 15,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: NoiseModel,
    pub n_trajectories: usize,
    /// Upper end of the amplitude range; the model's default when absent.
    pub amplitude_max: Option<f64>,
    /// Decision boundary; the range midpoint when absent.
    pub threshold: Option<f64>,
    pub label_rule: LabelRule,
    pub burn_in: usize,
    pub window: usize,
    pub params: EngineParams,
    pub embed: EmbedConfig,
    pub tda: TdaConfig,
    pub image: ImageConfig,
    pub silhouette_grid: usize,
    pub cv_folds: usize,
    pub logreg: LogRegConfig,
    pub reference: ReferenceConfig,
    pub master_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: NoiseModel::TimingJitter,
            n_trajectories: 200,
            amplitude_max: None,
            threshold: None,
            label_rule: LabelRule::Threshold,
            burn_in: 2,
            window: 5,
            params: EngineParams::default(),
            embed: EmbedConfig::default(),
            tda: TdaConfig::default(),
            image: ImageConfig::default(),
            silhouette_grid: 100,
            cv_folds: 5,
            logreg: LogRegConfig::default(),
            reference: ReferenceConfig::default(),
            master_seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn for_model(model: NoiseModel) -> Self {
        Self {
            model,
            ..Self::default()
        }
    }

    pub fn amplitude_max(&self) -> f64 {
        self.amplitude_max
            .unwrap_or_else(|| self.model.default_max_amplitude())
    }

    pub fn threshold(&self) -> f64 {
        self.threshold.unwrap_or_else(|| self.amplitude_max() / 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.logreg.validate()?;
        let a_max = self.amplitude_max();
        if !(a_max >= 0.0 && a_max.is_finite()) {
            return domain(format!(
                "amplitude_max must be finite and >= 0, got {a_max}"
            ));
        }
        if self.model == NoiseModel::None && self.label_rule == LabelRule::Threshold {
            return domain(
                "model none has no amplitude range to threshold; use label_rule random_balanced",
            );
        }
        if self.label_rule == LabelRule::Threshold {
            let t = self.threshold();
            if !(t > 0.0 && t < a_max) {
                return domain(format!(
                    "threshold {t} must lie strictly inside [0, {a_max}]"
                ));
            }
        }
        if self.model == NoiseModel::None && a_max > 0.0 {
            return domain("model none cannot carry a nonzero amplitude range");
        }
        if self.n_trajectories < 2 {
            return domain("need at least two trajectories");
        }
        if self.window == 0 {
            return domain("window must be at least one cycle");
        }
        if self.embed.dim == 0 || self.embed.delay == 0 {
            return domain("embedding dimension and delay must be positive");
        }
        if self.tda.point_budget < 2 {
            return domain("point budget must be at least 2");
        }
        if let MaxScalePolicy::Fixed(s) = self.tda.max_scale {
            if !(s > 0.0 && s.is_finite()) {
                return domain(format!("fixed max_scale must be positive, got {s}"));
            }
        }
        if self.silhouette_grid < 2 {
            return domain("silhouette grid needs at least two nodes");
        }
        if self.cv_folds < 2 {
            return domain("cross-validation needs at least two folds");
        }
        crate::vectorize::ImageGrid::new(
            self.image.rows,
            self.image.cols,
            (0.0, 1.0),
            (0.0, 1.0),
            self.image.sigma,
        )?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: Self = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }
}
