//! Pairwise shape distances.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::normalized_distance;
use crate::registration::DPConfig;
use crate::shape::{prepare, register_pair, Mode, ShapeInput};

/// A failed entry of a distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFailure {
    pub row: usize,
    pub col: usize,
    pub error: Error,
}

/// Symmetric matrix of normalized distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    pub mode: Mode,
    /// Row-major entries; failed pairs hold NaN.
    pub d: Vec<Vec<f64>>,
    pub failures: Vec<PairFailure>,
}

impl DistanceMatrix {
    /// Wraps precomputed distances, checking shape, symmetry and the diagonal.
    #[allow(clippy::needless_range_loop)]
    pub fn new(labels: Vec<String>, mode: Mode, d: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if d.len() != n || d.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!("distance matrix must be {n} x {n}")));
        }
        for i in 0..n {
            if d[i][i] != 0.0 {
                return Err(Error::InvalidArgument(format!("nonzero diagonal entry at {i}")));
            }
            for j in 0..i {
                let same = d[i][j] == d[j][i] || (d[i][j].is_nan() && d[j][i].is_nan());
                if !same {
                    return Err(Error::InvalidArgument(format!("asymmetric entries at ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            labels,
            mode,
            d,
            failures: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i][j]
    }
}

/// Normalized distances between all pairs of curves in `mode`.
///
/// For `i < j` curve `j` is registered onto curve `i` and the result is
/// mirrored, so the matrix is exactly symmetric. Pairs run in parallel, and
/// each entry depends only on its own pair. A pair that fails (including a
/// curve that cannot be prepared) becomes NaN and is listed in `failures`.
pub fn distance_matrix(
    curves: &[ShapeInput],
    labels: Vec<String>,
    mode: Mode,
    cfg: &DPConfig,
) -> Result<DistanceMatrix> {
    let n = curves.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "a distance matrix needs at least two curves".into(),
        ));
    }
    if labels.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} labels for {n} curves",
            labels.len()
        )));
    }
    cfg.validate()?;
    let prepared: Vec<Result<_>> = curves.par_iter().map(|c| prepare(c, mode)).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let results: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let a = prepared[i].as_ref().map_err(Clone::clone)?;
            let b = prepared[j].as_ref().map_err(Clone::clone)?;
            let r = register_pair(a, b, mode, cfg)?;
            Ok(normalized_distance(r.result.distance, mode.space()))
        })
        .collect();
    let mut d = vec![vec![0.0; n]; n];
    let mut failures = Vec::new();
    for (&(i, j), r) in pairs.iter().zip(results) {
        let v = match r {
            Ok(v) => v,
            Err(error) => {
                failures.push(PairFailure { row: i, col: j, error });
                f64::NAN
            }
        };
        d[i][j] = v;
        d[j][i] = v;
    }
    Ok(DistanceMatrix {
        labels,
        mode,
        d,
        failures,
    })
}
