//! Pairwise (cascade) summation.
//!
//! Rounding error grows as O(log n) instead of O(n) for naive accumulation,
//! which keeps mean/cost identities tight at n ~ 10^6.

const BLOCK: usize = 32;

/// Pairwise sum of `f(0) + f(1) + ... + f(n - 1)`.
pub fn pairwise_sum_by<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64,
{
    sum_range(0, n, &f)
}

fn sum_range<F: Fn(usize) -> f64>(lo: usize, hi: usize, f: &F) -> f64 {
    if hi - lo <= BLOCK {
        let mut acc = 0.0;
        for i in lo..hi {
            acc += f(i);
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    sum_range(lo, mid, f) + sum_range(mid, hi, f)
}

/// Pairwise sum of a slice.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_sum_by(values.len(), |i| values[i])
}

/// Column sums of a row-major `rows x dim` matrix, pairwise over rows.
pub fn pairwise_column_sums(data: &[f64], dim: usize) -> Vec<f64> {
    debug_assert!(dim > 0 && data.len().is_multiple_of(dim));
    let rows = data.len() / dim;
    let mut out = vec![0.0; dim];
    column_sums_into(data, dim, 0, rows, &mut out);
    out
}

fn column_sums_into(data: &[f64], dim: usize, lo: usize, hi: usize, out: &mut [f64]) {
    if hi - lo <= BLOCK {
        for row in data[lo * dim..hi * dim].chunks_exact(dim) {
            for (o, x) in out.iter_mut().zip(row) {
                *o += x;
            }
        }
        return;
    }
    let mid = lo + (hi - lo) / 2;
    let mut right = vec![0.0; dim];
    column_sums_into(data, dim, lo, mid, out);
    column_sums_into(data, dim, mid, hi, &mut right);
    for (o, r) in out.iter_mut().zip(&right) {
        *o += r;
    }
}
