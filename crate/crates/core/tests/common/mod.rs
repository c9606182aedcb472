//! Independent reference implementations used as oracles.
#![allow(dead_code)]

use otto_tem::tda::{PersistenceDiagram, PointCloud};
use rand::Rng;

fn dist(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// H1 of the Rips filtration by textbook reduction of the full boundary matrix over Z/2.
///
/// Every vertex, edge and triangle with filtration value ≤ `max_scale` enters in
/// (value, dimension) order. An H1 class is born at an edge column that reduces
/// to zero and dies at the triangle whose reduced column has that edge as its
/// lowest entry; classes still open at `max_scale` are closed there.
pub fn brute_force_rips_h1(points: &[Vec<f64>], max_scale: f64) -> Vec<(f64, f64)> {
    let n = points.len();
    // (value, dim, vertex list)
    let mut simplices: Vec<(f64, usize, Vec<usize>)> = (0..n).map(|i| (0.0, 0, vec![i])).collect();
    for i in 0..n {
        for j in i + 1..n {
            let v = dist(&points[i], &points[j]);
            if v <= max_scale {
                simplices.push((v, 1, vec![i, j]));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let v = dist(&points[i], &points[j])
                    .max(dist(&points[i], &points[k]))
                    .max(dist(&points[j], &points[k]));
                if v <= max_scale {
                    simplices.push((v, 2, vec![i, j, k]));
                }
            }
        }
    }
    simplices.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let index_of = |s: &[usize]| {
        simplices
            .iter()
            .position(|(_, _, v)| v.as_slice() == s)
            .unwrap()
    };

    let mut columns: Vec<Vec<usize>> = simplices
        .iter()
        .map(|(_, dim, v)| {
            if *dim == 0 {
                return vec![];
            }
            let mut col: Vec<usize> = (0..v.len())
                .map(|skip| {
                    let face: Vec<usize> = v
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, &x)| x)
                        .collect();
                    index_of(&face)
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect();

    let mut low_owner: Vec<Option<usize>> = vec![None; simplices.len()];
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match low_owner[low] {
                Some(k) => {
                    // symmetric difference of sorted columns
                    let other = columns[k].clone();
                    let mut merged = Vec::new();
                    let (mut a, mut b) = (0, 0);
                    let cur = &columns[j];
                    while a < cur.len() || b < other.len() {
                        if b == other.len() || (a < cur.len() && cur[a] < other[b]) {
                            merged.push(cur[a]);
                            a += 1;
                        } else if a == cur.len() || other[b] < cur[a] {
                            merged.push(other[b]);
                            b += 1;
                        } else {
                            a += 1;
                            b += 1;
                        }
                    }
                    columns[j] = merged;
                }
                None => {
                    low_owner[low] = Some(j);
                    break;
                }
            }
        }
    }

    let mut pairs = Vec::new();
    for (i, (birth, dim, _)) in simplices.iter().enumerate() {
        if *dim != 1 || !columns[i].is_empty() {
            continue;
        }
        let death = low_owner[i].map_or(max_scale, |j| simplices[j].0);
        if death > *birth {
            pairs.push((*birth, death));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pairs
}

fn l1(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs() + (a.1 - b.1).abs()
}

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

/// Enumerates every partial matching of `a` into `b`; unmatched points go to the diagonal.
fn enumerate_matchings(
    a: &[(f64, f64)],
    b: &[(f64, f64)],
    visit: &mut dyn FnMut(&[Option<usize>]),
) {
    fn go(
        i: usize,
        a: &[(f64, f64)],
        b: &[(f64, f64)],
        used: &mut Vec<bool>,
        cur: &mut Vec<Option<usize>>,
        visit: &mut dyn FnMut(&[Option<usize>]),
    ) {
        if i == a.len() {
            visit(cur);
            return;
        }
        cur.push(None);
        go(i + 1, a, b, used, cur, visit);
        cur.pop();
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                cur.push(Some(j));
                go(i + 1, a, b, used, cur, visit);
                cur.pop();
                used[j] = false;
            }
        }
    }
    go(0, a, b, &mut vec![false; b.len()], &mut Vec::new(), visit);
}

fn matched_costs(
    a: &[(f64, f64)],
    b: &[(f64, f64)],
    m: &[Option<usize>],
    ground: fn((f64, f64), (f64, f64)) -> f64,
    diag: fn((f64, f64)) -> f64,
) -> Vec<f64> {
    let mut costs = Vec::new();
    let mut hit = vec![false; b.len()];
    for (i, t) in m.iter().enumerate() {
        match t {
            Some(j) => {
                hit[*j] = true;
                costs.push(ground(a[i], b[*j]));
            }
            None => costs.push(diag(a[i])),
        }
    }
    costs.extend(
        b.iter()
            .zip(&hit)
            .filter(|(_, &h)| !h)
            .map(|(p, _)| diag(*p)),
    );
    costs
}

/// L1 ground metric, diagonal cost d − b.
pub fn exhaustive_w1(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut best = f64::INFINITY;
    enumerate_matchings(a, b, &mut |m| {
        best = best.min(matched_costs(a, b, m, l1, |p| p.1 - p.0).iter().sum());
    });
    best
}

/// L∞ ground metric, diagonal cost (d − b)/2.
pub fn exhaustive_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut best = f64::INFINITY;
    enumerate_matchings(a, b, &mut |m| {
        best = best.min(
            matched_costs(a, b, m, linf, |p| (p.1 - p.0) / 2.0)
                .into_iter()
                .fold(0.0, f64::max),
        );
    });
    best
}

pub fn random_points<R: Rng>(rng: &mut R, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect()
}

/// Small 3D clouds that tend to carry loops. `kind` cycles through uniform,
/// nearly planar, one noisy circle and two separated circles.
pub fn loopy_points<R: Rng>(rng: &mut R, n: usize, kind: usize) -> Vec<Vec<f64>> {
    match kind % 4 {
        0 => random_points(rng, n, 3),
        3 => (0..n)
            .map(|i| {
                // Two jittered loops far apart, so several classes die independently.
                let (half, j) = (n.div_ceil(2), i % n.div_ceil(2));
                let t =
                    std::f64::consts::TAU * (j as f64 + 0.2 * rng.random::<f64>()) / half as f64;
                let shift = if i < half { 0.0 } else { 5.0 };
                vec![t.cos() + shift, t.sin(), 0.1 * rng.random::<f64>()]
            })
            .collect(),
        1 => (0..n)
            .map(|_| {
                vec![
                    rng.random::<f64>(),
                    rng.random::<f64>(),
                    0.05 * rng.random::<f64>(),
                ]
            })
            .collect(),
        _ => (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * (i as f64 + 0.3 * rng.random::<f64>()) / n as f64;
                vec![
                    t.cos() + 0.2 * rng.random::<f64>(),
                    t.sin() + 0.2 * rng.random::<f64>(),
                    0.2 * rng.random::<f64>(),
                ]
            })
            .collect(),
    }
}

pub fn cloud(points: &[Vec<f64>]) -> PointCloud {
    PointCloud::from_points(points).unwrap()
}

pub fn random_pairs<R: Rng>(rng: &mut R, max_len: usize) -> Vec<(f64, f64)> {
    let n = rng.random_range(0..=max_len);
    (0..n)
        .map(|_| {
            let b: f64 = rng.random();
            (b, b + rng.random::<f64>())
        })
        .collect()
}

pub fn diagram(pairs: &[(f64, f64)]) -> PersistenceDiagram {
    PersistenceDiagram::h1(pairs).unwrap()
}

pub fn pairs_match(got: &[(f64, f64)], want: &[(f64, f64)], tol: f64) -> bool {
    got.len() == want.len()
        && got
            .iter()
            .zip(want)
            .all(|(g, w)| (g.0 - w.0).abs() <= tol && (g.1 - w.1).abs() <= tol)
}
