use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::{EmbedConfig, ExperimentConfig, MaxScalePolicy, TdaConfig};
use crate::error::{Error, Result};
use crate::ssm::ssm_features;
use crate::tda::{
    default_max_scale, delay_embed, rips_persistence_h1, subsample, PersistenceDiagram,
};
use crate::vectorize::{
    fit_silhouette_domain, persistence_image, persistence_silhouette, ImageGrid,
};

/// Sample rate handed to the SSM: spectra are in cycles per sample.
pub const SSM_SAMPLE_RATE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    TemImage,
    TemSilhouette,
    Ssm,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Ssm, Method::TemImage, Method::TemSilhouette];

    pub fn name(self) -> &'static str {
        match self {
            Method::TemImage => "tem_image",
            Method::TemSilhouette => "tem_silhouette",
            Method::Ssm => "ssm",
        }
    }

    pub fn is_topological(self) -> bool {
        self != Method::Ssm
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "tem_image" => Ok(Method::TemImage),
            "tem_silhouette" => Ok(Method::TemSilhouette),
            "ssm" => Ok(Method::Ssm),
            _ => Err(Error::Domain(format!(
                "unknown method '{s}' (expected tem-image, tem-silhouette or ssm)"
            ))),
        }
    }
}

/// Observable → delay cloud → subsample → H1 Rips diagram.
pub fn extract_diagram(
    series: &[f64],
    embed: &EmbedConfig,
    tda: &TdaConfig,
) -> Result<PersistenceDiagram> {
    let cloud = delay_embed(series, embed.dim, embed.delay)?;
    let cloud = subsample(&cloud, tda.point_budget, tda.subsample)?;
    let scale = match tda.max_scale {
        MaxScalePolicy::HalfDiameter => default_max_scale(&cloud),
        MaxScalePolicy::Fixed(s) => s,
    };
    if scale <= 0.0 {
        // a cloud collapsed to one point has no loops
        return Ok(PersistenceDiagram::empty(1));
    }
    rips_persistence_h1(&cloud, scale)
}

pub fn ssm_row(series: &[f64]) -> Result<Vec<f64>> {
    Ok(ssm_features(series, SSM_SAMPLE_RATE)?.to_vec())
}

/// Per-row inputs from which any method's features can be built.
#[derive(Debug, Clone, Copy)]
pub enum FeatureSource<'a> {
    Diagrams(&'a [PersistenceDiagram]),
    Table(&'a [Vec<f64>]),
}

impl FeatureSource<'_> {
    pub fn len(&self) -> usize {
        match self {
            FeatureSource::Diagrams(d) => d.len(),
            FeatureSource::Table(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Vectorizes the `train` and `test` rows. Any fitted range (image grid,
/// silhouette domain) comes from the training rows alone; labels never enter.
pub fn fold_features(
    method: Method,
    source: FeatureSource<'_>,
    train: &[usize],
    test: &[usize],
    cfg: &ExperimentConfig,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let pick = |rows: &[usize], f: &dyn Fn(usize) -> Result<Vec<f64>>| -> Result<Vec<Vec<f64>>> {
        rows.iter().map(|&i| f(i)).collect()
    };
    match (method, source) {
        (Method::Ssm, FeatureSource::Table(table)) => {
            let f = |i: usize| Ok(table[i].clone());
            Ok((pick(train, &f)?, pick(test, &f)?))
        }
        (Method::TemImage, FeatureSource::Diagrams(diagrams)) => {
            let im = &cfg.image;
            let grid = ImageGrid::fit(
                train.iter().map(|&i| &diagrams[i]),
                im.rows,
                im.cols,
                im.sigma,
            )?;
            let f = |i: usize| Ok(persistence_image(&diagrams[i], &grid, im.weight)?.pixels);
            Ok((pick(train, &f)?, pick(test, &f)?))
        }
        (Method::TemSilhouette, FeatureSource::Diagrams(diagrams)) => {
            let domain = fit_silhouette_domain(train.iter().map(|&i| &diagrams[i]));
            let f = |i: usize| {
                Ok(persistence_silhouette(&diagrams[i], cfg.silhouette_grid, domain)?.values)
            };
            Ok((pick(train, &f)?, pick(test, &f)?))
        }
        (m, _) => Err(Error::Domain(format!(
            "method {m} needs {} input",
            if m.is_topological() {
                "diagram"
            } else {
                "series-statistic"
            }
        ))),
    }
}
