//! Fixed-length vectorizations of persistence diagrams.
//!
//! Persistence images rasterize a diagram in (birth, persistence)
//! coordinates: each point carries a weighted unit-mass isotropic Gaussian and
//! a pixel holds the exact integral of that surface over its cell.
//! Silhouettes are weighted sums of tent functions sampled along the
//! filtration axis.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::error::{domain, Result};
use crate::tda::PersistenceDiagram;

/// Relative padding applied to fitted grid ranges.
pub const RANGE_PADDING: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PersistenceWeight {
    /// `w(p) = p`
    #[default]
    Linear,
    /// `w(p) = √p`
    Sqrt,
    /// `w(p) = 1`
    Constant,
}

impl PersistenceWeight {
    pub fn apply(self, p: f64) -> f64 {
        match self {
            PersistenceWeight::Linear => p,
            PersistenceWeight::Sqrt => p.max(0.0).sqrt(),
            PersistenceWeight::Constant => 1.0,
        }
    }
}

/// Pixel layout of a persistence image. Rows index persistence, columns birth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageGrid {
    pub rows: usize,
    pub cols: usize,
    pub birth_range: (f64, f64),
    pub pers_range: (f64, f64),
    pub sigma: f64,
}

impl ImageGrid {
    pub fn new(
        rows: usize,
        cols: usize,
        birth_range: (f64, f64),
        pers_range: (f64, f64),
        sigma: f64,
    ) -> Result<Self> {
        let g = Self {
            rows,
            cols,
            birth_range,
            pers_range,
            sigma,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return domain("image resolution must be positive");
        }
        let ok = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.1 > r.0;
        if !ok(self.birth_range) || !ok(self.pers_range) {
            return domain(format!(
                "grid ranges must be nonempty, got birth {:?} persistence {:?}",
                self.birth_range, self.pers_range
            ));
        }
        if !(self.sigma > 0.0) {
            return domain(format!("kernel width must be positive, got {}", self.sigma));
        }
        Ok(())
    }

    /// `[0, max birth] × [0, max persistence]` over `diagrams`, padded by [`RANGE_PADDING`].
    pub fn fit<'a>(
        diagrams: impl IntoIterator<Item = &'a PersistenceDiagram>,
        rows: usize,
        cols: usize,
        sigma: f64,
    ) -> Result<Self> {
        let (mut b_max, mut p_max) = (0.0f64, 0.0f64);
        for d in diagrams {
            for p in &d.pairs {
                b_max = b_max.max(p.birth);
                p_max = p_max.max(p.persistence());
            }
        }
        let upper = |m: f64| {
            if m > 0.0 {
                m * (1.0 + RANGE_PADDING)
            } else {
                1.0
            }
        };
        Self::new(rows, cols, (0.0, upper(b_max)), (0.0, upper(p_max)), sigma)
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn birth_edges(&self) -> Vec<f64> {
        edges(self.birth_range, self.cols)
    }

    fn pers_edges(&self) -> Vec<f64> {
        edges(self.pers_range, self.rows)
    }

    /// `(row, col)` of the cell containing `(birth, persistence)`, if inside the grid.
    pub fn cell_of(&self, birth: f64, persistence: f64) -> Option<(usize, usize)> {
        let locate = |v: f64, (lo, hi): (f64, f64), n: usize| {
            if v < lo || v > hi {
                return None;
            }
            Some((((v - lo) / (hi - lo) * n as f64) as usize).min(n - 1))
        };
        Some((
            locate(persistence, self.pers_range, self.rows)?,
            locate(birth, self.birth_range, self.cols)?,
        ))
    }
}

fn edges((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect()
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Gaussian mass of each interval `[edges[i], edges[i+1]]` around `center`.
fn interval_masses(edges: &[f64], center: f64, sigma: f64) -> Vec<f64> {
    let cdf: Vec<f64> = edges
        .iter()
        .map(|&e| normal_cdf((e - center) / sigma))
        .collect();
    cdf.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceImage {
    pub grid: ImageGrid,
    /// Row-major, `grid.rows × grid.cols`.
    pub pixels: Vec<f64>,
}

impl PersistenceImage {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.grid.cols + col]
    }

    pub fn total(&self) -> f64 {
        self.pixels.iter().sum()
    }

    /// `(row, col)` of the largest pixel.
    pub fn argmax(&self) -> (usize, usize) {
        let (i, _) = self
            .pixels
            .iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
            );
        (i / self.grid.cols, i % self.grid.cols)
    }
}

pub fn persistence_image(
    d: &PersistenceDiagram,
    grid: &ImageGrid,
    weight: PersistenceWeight,
) -> Result<PersistenceImage> {
    grid.validate()?;
    let (b_edges, p_edges) = (grid.birth_edges(), grid.pers_edges());
    let mut pixels = vec![0.0; grid.len()];
    for pair in &d.pairs {
        let p = pair.persistence();
        let w = weight.apply(p);
        if w == 0.0 {
            continue;
        }
        let along_b = interval_masses(&b_edges, pair.birth, grid.sigma);
        let along_p = interval_masses(&p_edges, p, grid.sigma);
        for (r, &mp) in along_p.iter().enumerate() {
            if mp == 0.0 {
                continue;
            }
            let row = &mut pixels[r * grid.cols..(r + 1) * grid.cols];
            for (px, &mb) in row.iter_mut().zip(&along_b) {
                *px += w * mp * mb;
            }
        }
    }
    Ok(PersistenceImage {
        grid: *grid,
        pixels,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Silhouette {
    pub domain: (f64, f64),
    pub values: Vec<f64>,
}

/// `Λ(x) = Σ_j √p_j max(0, p_j/2 − |x − m_j|)` at a single filtration value.
pub fn silhouette_at(d: &PersistenceDiagram, x: f64) -> f64 {
    d.pairs
        .iter()
        .map(|p| {
            let pers = p.persistence();
            pers.sqrt() * (0.5 * pers - (x - p.midpoint()).abs()).max(0.0)
        })
        .sum()
}

/// [`silhouette_at`] on `n_grid` evenly spaced points spanning `domain`, endpoints included.
pub fn persistence_silhouette(
    d: &PersistenceDiagram,
    n_grid: usize,
    domain: (f64, f64),
) -> Result<Silhouette> {
    if n_grid < 2 {
        return crate::error::domain(format!(
            "silhouette needs at least 2 grid points, got {n_grid}"
        ));
    }
    if !(domain.1 > domain.0) || !domain.0.is_finite() || !domain.1.is_finite() {
        return crate::error::domain(format!(
            "silhouette domain must be nonempty, got {domain:?}"
        ));
    }
    let step = (domain.1 - domain.0) / (n_grid - 1) as f64;
    let values = (0..n_grid)
        .map(|i| silhouette_at(d, domain.0 + step * i as f64))
        .collect();
    Ok(Silhouette { domain, values })
}

/// `[0, max death]` over `diagrams`; `[0, 1]` if they hold no pairs.
pub fn fit_silhouette_domain<'a>(
    diagrams: impl IntoIterator<Item = &'a PersistenceDiagram>,
) -> (f64, f64) {
    let top = diagrams
        .into_iter()
        .flat_map(|d| d.pairs.iter())
        .map(|p| p.death)
        .fold(0.0, f64::max);
    (0.0, if top > 0.0 { top } else { 1.0 })
}
