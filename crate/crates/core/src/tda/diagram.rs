use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::format::sig9;

/// A finite (birth, death) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub birth: f64,
    pub death: f64,
}

impl PersistencePair {
    pub fn new(birth: f64, death: f64) -> Self {
        Self { birth, death }
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.birth + self.death)
    }
}

/// Multiset of persistence pairs for one homology degree.
///
/// Classes still alive at the end of a truncated filtration are stored with
/// their death capped at `max_scale`, so every pair is finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub degree: usize,
    /// Filtration cap the diagram was computed with.
    pub max_scale: f64,
    pub pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    pub fn new(degree: usize, max_scale: f64, pairs: Vec<PersistencePair>) -> Result<Self> {
        for p in &pairs {
            if !(p.birth.is_finite() && p.death.is_finite() && 0.0 <= p.birth && p.birth <= p.death)
            {
                return domain(format!("invalid pair ({}, {})", p.birth, p.death));
            }
        }
        Ok(Self {
            degree,
            max_scale,
            pairs,
        })
    }

    /// Degree-1 diagram from `(birth, death)` tuples; the cap is the largest death.
    pub fn h1(pairs: &[(f64, f64)]) -> Result<Self> {
        let cap = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
        Self::new(
            1,
            cap,
            pairs
                .iter()
                .map(|&(b, d)| PersistencePair::new(b, d))
                .collect(),
        )
    }

    pub fn empty(degree: usize) -> Self {
        Self {
            degree,
            max_scale: 0.0,
            pairs: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Persistence values sorted in decreasing order.
    pub fn persistences_desc(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self.pairs.iter().map(|p| p.persistence()).collect();
        p.sort_by(|a, b| b.total_cmp(a));
        p
    }

    /// Pairs sorted by (birth, death), for order-insensitive comparison.
    pub fn sorted_pairs(&self) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = self.pairs.iter().map(|p| (p.birth, p.death)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        v
    }

    /// Multiset union of two diagrams of the same degree.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return domain("cannot merge diagrams of different degree");
        }
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        Ok(Self {
            degree: self.degree,
            max_scale: self.max_scale.max(other.max_scale),
            pairs,
        })
    }

    /// Writes `# degree=<k> max_scale=<v>` followed by a `birth,death` table.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# degree={} max_scale={}",
            self.degree,
            sig9(self.max_scale)
        )?;
        writeln!(out, "birth,death")?;
        for p in &self.pairs {
            writeln!(out, "{},{}", sig9(p.birth), sig9(p.death))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R, origin: &Path) -> Result<Self> {
        let bad = |reason: String| Error::Parse {
            path: origin.to_path_buf(),
            reason,
        };
        let mut lines = input.lines();
        let first = lines.next().ok_or_else(|| bad("empty file".into()))??;
        let mut degree = None;
        let mut max_scale = None;
        for field in first.trim_start_matches('#').split_whitespace() {
            match field.split_once('=') {
                Some(("degree", v)) => degree = v.parse::<usize>().ok(),
                Some(("max_scale", v)) => max_scale = v.parse::<f64>().ok(),
                _ => {}
            }
        }
        let (Some(degree), Some(max_scale)) = (degree, max_scale) else {
            return Err(bad(format!("bad metadata line `{first}`")));
        };
        let header = lines.next().ok_or_else(|| bad("missing header".into()))??;
        if header.trim() != "birth,death" {
            return Err(bad(format!("unexpected header `{header}`")));
        }
        let mut pairs = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (b, d) = line
                .split_once(',')
                .ok_or_else(|| bad(format!("row {}: expected two columns", i + 3)))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| bad(format!("row {}: {e}", i + 3)))
            };
            pairs.push(PersistencePair::new(parse(b)?, parse(d)?));
        }
        Self::new(degree, max_scale, pairs)
    }
}
