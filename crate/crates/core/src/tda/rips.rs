//! Degree-1 persistent homology of the Vietoris–Rips filtration.
//!
//! Works in the cohomology setting: edges that do not merge connected
//! components are reduced in decreasing filtration order, and the coboundary
//! pivot of each column (its earliest cofacet triangle) pairs a 1-class birth
//! with its death. Coboundaries are generated on the fly from the distance
//! matrix, so triangles are never stored in bulk. Columns whose earliest
//! cofacet is not yet claimed are paired without materializing the column.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use super::diagram::{PersistenceDiagram, PersistencePair};
use super::embed::PointCloud;
use crate::error::{domain, Result};

/// Default filtration cap: half the cloud's diameter.
pub fn default_max_scale(cloud: &PointCloud) -> f64 {
    0.5 * cloud.diameter()
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    f: f64,
    a: u32,
    b: u32,
}

/// A triangle with vertices in increasing order; ordered by filtration value,
/// then lexicographically by vertices.
#[derive(Debug, Clone, Copy)]
struct Tri {
    f: f64,
    v: [u32; 3],
}

impl PartialEq for Tri {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Tri {}

impl PartialOrd for Tri {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Tri {
    fn cmp(&self, other: &Self) -> Ordering {
        self.f
            .total_cmp(&other.f)
            .then_with(|| self.v.cmp(&other.v))
    }
}

struct Filtration {
    n: usize,
    dist: Vec<f64>,
    max_scale: f64,
}

impl Filtration {
    #[inline]
    fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    fn key(&self, t: &Tri) -> u64 {
        let n = self.n as u64;
        (t.v[0] as u64 * n + t.v[1] as u64) * n + t.v[2] as u64
    }

    /// Calls `f` on every triangle of the truncated filtration containing `e`.
    #[inline]
    fn for_each_cofacet(&self, e: &Edge, mut f: impl FnMut(Tri)) {
        let (a, b) = (e.a as usize, e.b as usize);
        let row_a = &self.dist[a * self.n..(a + 1) * self.n];
        let row_b = &self.dist[b * self.n..(b + 1) * self.n];
        for v in 0..self.n {
            if v == a || v == b {
                continue;
            }
            let (da, db) = (row_a[v], row_b[v]);
            if da > self.max_scale || db > self.max_scale {
                continue;
            }
            let fv = e.f.max(da).max(db);
            let v = v as u32;
            let verts = if v < e.a {
                [v, e.a, e.b]
            } else if v < e.b {
                [e.a, v, e.b]
            } else {
                [e.a, e.b, v]
            };
            f(Tri { f: fv, v: verts });
        }
    }

    fn min_cofacet(&self, e: &Edge) -> Option<Tri> {
        let mut best: Option<Tri> = None;
        self.for_each_cofacet(e, |t| {
            if best.is_none_or(|b| t < b) {
                best = Some(t);
            }
        });
        best
    }
}

/// Pops cancelling duplicates and returns the smallest entry with odd multiplicity,
/// leaving it on the heap.
fn pivot(heap: &mut BinaryHeap<Reverse<Tri>>) -> Option<Tri> {
    loop {
        let Reverse(top) = heap.pop()?;
        match heap.peek() {
            Some(Reverse(next)) if *next == top => {
                heap.pop();
            }
            _ => {
                heap.push(Reverse(top));
                return Some(top);
            }
        }
    }
}

/// H1 persistence of the Rips filtration of `cloud`, truncated at `max_scale`.
///
/// Classes alive at `max_scale` are reported with death `max_scale`;
/// zero-persistence pairs are dropped. Ties in filtration value are broken by
/// lexicographic vertex order.
pub fn rips_persistence_h1(cloud: &PointCloud, max_scale: f64) -> Result<PersistenceDiagram> {
    if !(max_scale > 0.0) || !max_scale.is_finite() {
        return domain(format!(
            "max_scale must be positive and finite, got {max_scale}"
        ));
    }
    let n = cloud.len();
    if cloud.points().flatten().any(|c| !c.is_finite()) {
        return domain("point cloud contains non-finite coordinates");
    }
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = cloud.dist(i, j);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    let filt = Filtration { n, dist, max_scale };

    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let f = filt.d(a, b);
            if f <= max_scale {
                edges.push(Edge {
                    f,
                    a: a as u32,
                    b: b as u32,
                });
            }
        }
    }
    edges.sort_by(|x, y| x.f.total_cmp(&y.f).then(x.a.cmp(&y.a)).then(x.b.cmp(&y.b)));

    // Edges merging two components are paired in degree 0 and cleared here.
    let mut uf = UnionFind::new(n);
    let columns: Vec<usize> = (0..edges.len())
        .filter(|&i| !uf.union(edges[i].a as usize, edges[i].b as usize))
        .collect();

    let mut pivot_owner: HashMap<u64, usize> = HashMap::new();
    let mut reductions: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut pairs = Vec::new();
    let mut record = |birth: f64, death: f64| {
        if death > birth {
            pairs.push(PersistencePair::new(birth, death));
        }
    };

    for &col in columns.iter().rev() {
        let edge = edges[col];
        let Some(first) = filt.min_cofacet(&edge) else {
            record(edge.f, max_scale);
            continue;
        };
        let first_key = filt.key(&first);
        if let std::collections::hash_map::Entry::Vacant(e) = pivot_owner.entry(first_key) {
            e.insert(col);
            record(edge.f, first.f);
            continue;
        }

        let mut heap = BinaryHeap::new();
        filt.for_each_cofacet(&edge, |t| heap.push(Reverse(t)));
        let mut added: Vec<usize> = Vec::new();
        loop {
            let Some(t) = pivot(&mut heap) else {
                record(edge.f, max_scale);
                break;
            };
            let key = filt.key(&t);
            match pivot_owner.get(&key) {
                Some(&owner) => {
                    added.push(owner);
                    filt.for_each_cofacet(&edges[owner], |c| heap.push(Reverse(c)));
                    if let Some(extra) = reductions.get(&owner) {
                        for &e in extra {
                            added.push(e);
                            filt.for_each_cofacet(&edges[e], |c| heap.push(Reverse(c)));
                        }
                    }
                }
                None => {
                    pivot_owner.insert(key, col);
                    reductions.insert(col, cancel_pairs(added));
                    record(edge.f, t.f);
                    break;
                }
            }
        }
    }

    PersistenceDiagram::new(1, max_scale, pairs)
}

/// Keeps the entries occurring an odd number of times.
fn cancel_pairs(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    let mut out = Vec::with_capacity(v.len());
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(v[i]);
        }
        i = j;
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if `a` and `b` were in different sets.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn collinear_points_have_no_loops() {
        let c =
            PointCloud::from_points(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]]).unwrap();
        assert!(rips_persistence_h1(&c, 5.0).unwrap().is_empty());
    }

    #[test]
    fn unit_square() {
        let c = PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let d = rips_persistence_h1(&c, 3.0).unwrap();
        assert_eq!(d.len(), 1);
        assert!((d.pairs[0].birth - 1.0).abs() < 1e-12);
        assert!((d.pairs[0].death - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn square_truncated_below_death_is_capped() {
        let c = PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let d = rips_persistence_h1(&c, 1.2).unwrap();
        assert_eq!(d.sorted_pairs(), vec![(1.0, 1.2)]);
        assert!(rips_persistence_h1(&c, 0.9).unwrap().is_empty());
    }

    #[test]
    fn circle_has_one_dominant_loop() {
        let pts: Vec<[f64; 2]> = (0..60)
            .map(|i| 2.0 * PI * i as f64 / 60.0)
            .map(|t| [t.cos(), t.sin()])
            .collect();
        let c = PointCloud::from_points(&pts).unwrap();
        let d = rips_persistence_h1(&c, default_max_scale(&c)).unwrap();
        let p = d.persistences_desc();
        assert!(p[0] >= 0.8, "{p:?}");
        assert!(p.iter().skip(1).all(|&x| x < 0.1), "{p:?}");
    }

    #[test]
    fn rejects_bad_scale() {
        let c = PointCloud::from_points(&[[0.0], [1.0]]).unwrap();
        assert!(rips_persistence_h1(&c, 0.0).is_err());
        assert!(rips_persistence_h1(&c, f64::NAN).is_err());
    }

    #[test]
    fn cancel_pairs_mod_two() {
        assert_eq!(cancel_pairs(vec![3, 1, 3, 2, 1, 1]), vec![1, 2]);
    }
}
