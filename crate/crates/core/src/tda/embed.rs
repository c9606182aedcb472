//! Delay-coordinate reconstruction and point-cloud subsampling.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Points of equal dimension stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return domain("point dimension must be at least 1");
        }
        if coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return domain(format!(
                "{} coordinates do not form nonempty {dim}-dimensional points",
                coords.len()
            ));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let Some(first) = points.first() else {
            return domain("point cloud must be nonempty");
        };
        let dim = first.as_ref().len();
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return domain(format!("mixed point dimensions {dim} and {}", p.len()));
            }
            coords.extend_from_slice(p);
        }
        Self::new(dim, coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        euclidean(self.point(i), self.point(j))
    }

    /// Largest pairwise Euclidean distance.
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(self.dist(i, j));
            }
        }
        best
    }

    pub fn select(&self, indices: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        Self {
            dim: self.dim,
            coords,
        }
    }
}

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Delay vectors `(x_i, x_{i+τ}, …, x_{i+(d−1)τ})` in series order.
pub fn delay_embed(series: &[f64], dim: usize, delay: usize) -> Result<PointCloud> {
    if dim == 0 || delay == 0 {
        return domain("embedding dimension and delay must be at least 1");
    }
    let span = (dim - 1) * delay;
    if series.len() <= span {
        return domain(format!(
            "series of length {} too short for dimension {dim} and delay {delay}",
            series.len()
        ));
    }
    let n = series.len() - span;
    let mut coords = Vec::with_capacity(n * dim);
    for i in 0..n {
        coords.extend((0..dim).map(|k| series[i + k * delay]));
    }
    PointCloud::new(dim, coords)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubsampleMethod {
    /// Every `⌈n/target⌉`-th point, order preserved.
    #[default]
    Stride,
    /// Greedy farthest-point landmarks seeded at index 0.
    Maxmin,
}

/// Indices kept by [`subsample`].
pub fn subsample_indices(
    cloud: &PointCloud,
    target: usize,
    method: SubsampleMethod,
) -> Result<Vec<usize>> {
    if target < 2 {
        return domain(format!("subsample target must be at least 2, got {target}"));
    }
    let n = cloud.len();
    if n <= target {
        return Ok((0..n).collect());
    }
    Ok(match method {
        SubsampleMethod::Stride => {
            let step = n.div_ceil(target);
            (0..n).step_by(step).collect()
        }
        SubsampleMethod::Maxmin => {
            let mut chosen = vec![0usize];
            let mut nearest: Vec<f64> = (0..n).map(|i| cloud.dist(0, i)).collect();
            while chosen.len() < target {
                // first index wins ties
                let (far, _) =
                    nearest
                        .iter()
                        .enumerate()
                        .fold(
                            (0, f64::NEG_INFINITY),
                            |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc },
                        );
                chosen.push(far);
                for (i, d) in nearest.iter_mut().enumerate() {
                    *d = d.min(cloud.dist(far, i));
                }
            }
            chosen
        }
    })
}

pub fn subsample(cloud: &PointCloud, target: usize, method: SubsampleMethod) -> Result<PointCloud> {
    let idx = subsample_indices(cloud, target, method)?;
    Ok(if idx.len() == cloud.len() {
        cloud.clone()
    } else {
        cloud.select(&idx)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embed_examples() {
        let s = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let c = delay_embed(&s, 3, 1).unwrap();
        let pts: Vec<Vec<f64>> = c.points().map(|p| p.to_vec()).collect();
        assert_eq!(
            pts,
            vec![
                vec![0., 1., 2.],
                vec![1., 2., 3.],
                vec![2., 3., 4.],
                vec![3., 4., 5.]
            ]
        );

        let c = delay_embed(&s, 2, 2).unwrap();
        let pts: Vec<Vec<f64>> = c.points().map(|p| p.to_vec()).collect();
        assert_eq!(
            pts,
            vec![vec![0., 2.], vec![1., 3.], vec![2., 4.], vec![3., 5.]]
        );

        let long: Vec<f64> = (0..30).map(|i| i as f64).collect();
        assert_eq!(delay_embed(&long, 3, 10).unwrap().len(), 10);
    }

    #[test]
    fn embed_rejects_short_series() {
        assert!(delay_embed(&[1.0; 20], 3, 10).is_err());
        assert!(delay_embed(&[1.0; 21], 3, 10).is_ok());
        assert!(delay_embed(&[1.0; 5], 0, 1).is_err());
        assert!(delay_embed(&[1.0; 5], 2, 0).is_err());
    }

    #[test]
    fn subsample_examples() {
        let pts: Vec<[f64; 1]> = (0..100).map(|i| [i as f64]).collect();
        let c = PointCloud::from_points(&pts).unwrap();
        assert_eq!(subsample(&c, 100, SubsampleMethod::Stride).unwrap(), c);

        let pts: Vec<[f64; 1]> = (0..10).map(|i| [i as f64]).collect();
        let c = PointCloud::from_points(&pts).unwrap();
        assert_eq!(
            subsample_indices(&c, 5, SubsampleMethod::Stride).unwrap(),
            vec![0, 2, 4, 6, 8]
        );

        let square =
            PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(
            subsample_indices(&square, 2, SubsampleMethod::Maxmin).unwrap(),
            vec![0, 2]
        );

        assert!(subsample(&c, 1, SubsampleMethod::Stride).is_err());
    }

    #[test]
    fn cloud_validation() {
        assert!(PointCloud::new(3, vec![]).is_err());
        assert!(PointCloud::new(3, vec![1.0, 2.0]).is_err());
        assert!(PointCloud::from_points(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        let empty: [[f64; 2]; 0] = [];
        assert!(PointCloud::from_points(&empty).is_err());
    }
}
