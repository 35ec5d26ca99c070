//! Partitioning around medoids on a precomputed distance matrix.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Improvements smaller than this do not count as a decrease.
const IMPROVEMENT_TOL: f64 = 1e-12;

/// Outcome of [`k_medoids`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult {
    /// Sample indices of the medoids, ascending.
    pub medoids: Vec<usize>,
    /// For each sample, the index of its nearest medoid (a sample index).
    pub assignment: Vec<usize>,
    pub total_cost: f64,
    pub seed: u64,
    /// Total cost after the build phase and after every accepted swap.
    pub cost_history: Vec<f64>,
    /// Share of the samples in the largest cluster.
    pub largest_cluster_fraction: f64,
}

fn check(d: &[Vec<f64>], k: usize) -> Result<()> {
    let n = d.len();
    if k < 1 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    for (i, row) in d.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidArgument(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        if let Some(j) = row.iter().position(|v| v.is_nan()) {
            return Err(Error::IncompleteMatrix { row: i, col: j });
        }
    }
    Ok(())
}

/// Distance of each sample to its nearest medoid.
fn nearest(d: &[Vec<f64>], medoids: &[usize]) -> Vec<f64> {
    (0..d.len())
        .map(|i| medoids.iter().map(|&m| d[i][m]).fold(f64::INFINITY, f64::min))
        .collect()
}

fn cost(d: &[Vec<f64>], medoids: &[usize]) -> f64 {
    nearest(d, medoids).iter().sum()
}

/// k-medoids clustering of the samples of the distance matrix `d`.
///
/// A greedy build phase adds, one at a time, the medoid that lowers the
/// total cost most; candidates are scanned in an order shuffled by `seed`,
/// which decides ties. The swap phase then repeatedly performs the best
/// single medoid/non-medoid exchange until none lowers the cost.
pub fn k_medoids(d: &[Vec<f64>], k: usize, seed: u64) -> Result<ClusterResult> {
    check(d, k)?;
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut medoids: Vec<usize> = Vec::with_capacity(k);
    while medoids.len() < k {
        let mut best: Option<(usize, f64)> = None;
        for &c in order.iter().filter(|c| !medoids.contains(c)) {
            let mut trial = medoids.clone();
            trial.push(c);
            let v = cost(d, &trial);
            if best.is_none_or(|(_, b)| v < b - IMPROVEMENT_TOL) {
                best = Some((c, v));
            }
        }
        medoids.push(best.expect("k <= n leaves a candidate").0);
    }

    let mut current = cost(d, &medoids);
    let mut cost_history = vec![current];
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for slot in 0..k {
            for &h in order.iter().filter(|h| !medoids.contains(h)) {
                let mut trial = medoids.clone();
                trial[slot] = h;
                let v = cost(d, &trial);
                let bar = best.map_or(current, |b| b.2);
                if v < bar - IMPROVEMENT_TOL {
                    best = Some((slot, h, v));
                }
            }
        }
        match best {
            Some((slot, h, v)) => {
                medoids[slot] = h;
                current = v;
                cost_history.push(v);
            }
            None => break,
        }
    }

    medoids.sort_unstable();
    let assignment: Vec<usize> = (0..n)
        .map(|i| {
            let mut arg = medoids[0];
            for &m in &medoids[1..] {
                if d[i][m] < d[i][arg] {
                    arg = m;
                }
            }
            arg
        })
        .collect();
    let largest = medoids
        .iter()
        .map(|m| assignment.iter().filter(|a| *a == m).count())
        .max()
        .unwrap_or(0);
    Ok(ClusterResult {
        total_cost: cost(d, &medoids),
        medoids,
        assignment,
        seed,
        cost_history,
        largest_cluster_fraction: largest as f64 / n as f64,
    })
}
