//! MinSumSelect: score each candidate by the sum of distances to its
//! `ceil(0.7 |P|)` nearest candidates (itself included) and keep the
//! minimizer, applied recursively over `~sqrt(|P|)` clusters.

use serde::{Deserialize, Serialize};

use crate::config::EstimatorConfig;
use crate::point::{dist, Point, PointSet};
use crate::select::select_in_place;

/// `ceil(0.7 * len)`, the number of nearest candidates summed in a score.
pub fn truncation_rank(len: usize) -> usize {
    (7 * len).div_ceil(10)
}

/// Truncated distance sum of one candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WinnerScore {
    pub index: usize,
    /// Sum of the `t` smallest distances from the candidate.
    pub score: f64,
    pub t: usize,
}

/// Scores of the candidates `indices` of `points`, each computed against
/// the other members of `indices`. O(|indices|^2 d).
pub fn winner_scores(points: &PointSet, indices: &[usize]) -> Vec<WinnerScore> {
    let len = indices.len();
    let t = truncation_rank(len);
    let mut row = vec![0.0; len];
    indices
        .iter()
        .map(|&j| {
            let pj = points.row(j);
            for (slot, &k) in row.iter_mut().zip(indices) {
                *slot = dist(pj, points.row(k));
            }
            if t < len {
                select_in_place(&mut row, t - 1);
            }
            let score = row[..t].iter().sum();
            WinnerScore { index: j, score, t }
        })
        .collect()
}

/// Index (into `points`) of the best-scoring member of `indices`; ties go to
/// the earliest position in `indices`.
pub fn compute_winner_among(points: &PointSet, indices: &[usize]) -> usize {
    assert!(!indices.is_empty(), "compute_winner needs at least one candidate");
    if indices.len() == 1 {
        return indices[0];
    }
    let scores = winner_scores(points, indices);
    let mut best = scores[0];
    for s in &scores[1..] {
        if s.score < best.score {
            best = *s;
        }
    }
    best.index
}

/// Index of the winner over the whole set.
pub fn compute_winner_index(points: &PointSet) -> usize {
    let all: Vec<usize> = (0..points.len()).collect();
    compute_winner_among(points, &all)
}

pub fn compute_winner(points: &PointSet) -> Point {
    points.point(compute_winner_index(points))
}

/// Number of clusters a level of `len` candidates is split into:
/// `ceil(len^exponent)`, clamped to `[1, len]`.
pub fn cluster_count(len: usize, exponent: f64) -> usize {
    let k = if exponent == 0.5 {
        ceil_sqrt(len)
    } else {
        // Shave off rounding noise so exact powers do not round up.
        ((len as f64).powf(exponent) * (1.0 - 1e-12)).ceil() as usize
    };
    k.clamp(1, len.max(1))
}

fn ceil_sqrt(n: usize) -> usize {
    let r = n.isqrt();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// Splits `len` items into `k` contiguous groups whose sizes differ by at most one.
pub fn cluster_bounds(len: usize, k: usize) -> Vec<std::ops::Range<usize>> {
    let base = len / k;
    let extra = len % k;
    let mut out = Vec::with_capacity(k);
    let mut start = 0;
    for c in 0..k {
        let size = base + usize::from(c < extra);
        out.push(start..start + size);
        start += size;
    }
    out
}

/// MinSumSelect over the whole set with the default `sqrt` split. Returns an index.
pub fn minsum_select_index(points: &PointSet, depth: usize) -> usize {
    minsum_select_index_with(points, depth, 0.5)
}

pub fn minsum_select_index_with(points: &PointSet, depth: usize, cluster_exponent: f64) -> usize {
    let all: Vec<usize> = (0..points.len()).collect();
    select_rec(points, &all, depth, cluster_exponent)
}

fn select_rec(points: &PointSet, indices: &[usize], depth: usize, exponent: f64) -> usize {
    if depth == 0 || indices.len() == 1 {
        return compute_winner_among(points, indices);
    }
    let k = cluster_count(indices.len(), exponent);
    let winners: Vec<usize> = cluster_bounds(indices.len(), k)
        .into_iter()
        .map(|range| select_rec(points, &indices[range], depth - 1, exponent))
        .collect();
    compute_winner_among(points, &winners)
}

pub fn minsum_select(points: &PointSet, depth: usize) -> Point {
    points.point(minsum_select_index(points, depth))
}

/// Aggregates candidate means with MinSumSelect at `cfg.depth`.
pub fn minsum_estimate(means: &PointSet, cfg: &EstimatorConfig) -> Point {
    means.point(minsum_select_index_with(means, cfg.depth, cfg.cluster_exponent))
}
