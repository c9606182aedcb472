//! Exact matching distances between persistence diagrams.
//!
//! Both distances match points of one diagram to points of the other or to
//! the diagonal. The problem is posed on the usual augmented square matrix:
//! each diagram is padded with one diagonal slot per point of the other, a
//! point may go to any diagonal slot at its own distance to the diagonal, and
//! diagonal-to-diagonal matches are free.

use serde::{Deserialize, Serialize};

use super::diagram::{PersistenceDiagram, PersistencePair};
use crate::error::{domain, Result};
use crate::format::ser_f64;

/// Distances of an observed diagram to a reference and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramDistanceReport {
    #[serde(serialize_with = "ser_f64")]
    pub wasserstein1: f64,
    #[serde(serialize_with = "ser_f64")]
    pub bottleneck: f64,
    /// `wasserstein1 + bottleneck`
    #[serde(serialize_with = "ser_f64")]
    pub qi: f64,
}

fn l1(a: &PersistencePair, b: &PersistencePair) -> f64 {
    (a.birth - b.birth).abs() + (a.death - b.death).abs()
}

fn linf(a: &PersistencePair, b: &PersistencePair) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

/// Row-major augmented cost matrix of side `n + m`.
fn augmented_costs(
    d: &[PersistencePair],
    r: &[PersistencePair],
    ground: fn(&PersistencePair, &PersistencePair) -> f64,
    to_diagonal: fn(&PersistencePair) -> f64,
) -> (usize, Vec<f64>) {
    let (n, m) = (d.len(), r.len());
    let size = n + m;
    let mut c = vec![0.0; size * size];
    for i in 0..n {
        let row = &mut c[i * size..(i + 1) * size];
        for j in 0..m {
            row[j] = ground(&d[i], &r[j]);
        }
        let diag = to_diagonal(&d[i]);
        row[m..].fill(diag);
    }
    for l in 0..m {
        let row = &mut c[(n + l) * size..(n + l + 1) * size];
        for j in 0..m {
            row[j] = to_diagonal(&r[j]);
        }
    }
    (size, c)
}

fn check_degrees(a: &PersistenceDiagram, b: &PersistenceDiagram) -> Result<()> {
    if a.degree != b.degree {
        return domain(format!(
            "diagram degrees differ: {} vs {}",
            a.degree, b.degree
        ));
    }
    Ok(())
}

/// 1-Wasserstein distance with L1 ground metric; a point `(b, d)` pays `d − b`
/// to reach the diagonal.
pub fn wasserstein1(d: &PersistenceDiagram, reference: &PersistenceDiagram) -> Result<f64> {
    check_degrees(d, reference)?;
    if d.is_empty() && reference.is_empty() {
        return Ok(0.0);
    }
    let (size, costs) = augmented_costs(&d.pairs, &reference.pairs, l1, |p| p.persistence());
    let assignment = min_cost_assignment(size, &costs);
    Ok(assignment
        .iter()
        .enumerate()
        .map(|(row, &col)| costs[row * size + col])
        .sum())
}

/// Bottleneck distance with L∞ ground metric; a point `(b, d)` pays `(d − b)/2`
/// to reach the diagonal.
pub fn bottleneck(d: &PersistenceDiagram, reference: &PersistenceDiagram) -> Result<f64> {
    check_degrees(d, reference)?;
    if d.is_empty() && reference.is_empty() {
        return Ok(0.0);
    }
    let (size, costs) =
        augmented_costs(&d.pairs, &reference.pairs, linf, |p| 0.5 * p.persistence());
    let mut candidates = costs.clone();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // The largest candidate is always feasible.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if has_perfect_matching(size, &costs, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}

pub fn quality_index(
    d: &PersistenceDiagram,
    reference: &PersistenceDiagram,
) -> Result<DiagramDistanceReport> {
    let wasserstein1 = wasserstein1(d, reference)?;
    let bottleneck = bottleneck(d, reference)?;
    Ok(DiagramDistanceReport {
        wasserstein1,
        bottleneck,
        qi: wasserstein1 + bottleneck,
    })
}

/// Hungarian algorithm with potentials; returns the column assigned to each row.
fn min_cost_assignment(n: usize, cost: &[f64]) -> Vec<usize> {
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![inf; n + 1];
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        minv.fill(inf);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = inf;
            let mut j1 = 0;
            let row = &cost[(i0 - 1) * n..i0 * n];
            for j in 1..=n {
                if !used[j] {
                    let cur = row[j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    assignment
}

/// Hopcroft–Karp on the bipartite graph of entries `≤ radius`.
fn has_perfect_matching(n: usize, cost: &[f64], radius: f64) -> bool {
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| cost[i * n + j] <= radius).collect())
        .collect();
    if adj.iter().any(Vec::is_empty) {
        return false;
    }
    const NIL: usize = usize::MAX;
    let mut match_l = vec![NIL; n];
    let mut match_r = vec![NIL; n];
    let mut dist = vec![0usize; n];
    let mut matched = 0;

    loop {
        // BFS layering from free left vertices.
        let mut queue = std::collections::VecDeque::new();
        for i in 0..n {
            if match_l[i] == NIL {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                let k = match_r[j];
                if k == NIL {
                    found = true;
                } else if dist[k] == usize::MAX {
                    dist[k] = dist[i] + 1;
                    queue.push_back(k);
                }
            }
        }
        if !found {
            break;
        }
        for i in 0..n {
            if match_l[i] == NIL && augment(i, &adj, &mut match_l, &mut match_r, &mut dist) {
                matched += 1;
            }
        }
    }
    matched == n
}

fn augment(
    i: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &j in &adj[i] {
        let k = match_r[j];
        if k == usize::MAX || (dist[k] == dist[i] + 1 && augment(k, adj, match_l, match_r, dist)) {
            match_l[i] = j;
            match_r[j] = i;
            return true;
        }
    }
    dist[i] = usize::MAX;
    false
}
