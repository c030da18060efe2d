//! Rank selection and medians.
//!
//! `select_in_place` is an introselect: quickselect with median-of-three
//! pivots and three-way partitioning, switching to median-of-medians pivots
//! once the iteration budget (2 log2 n) runs out, so the worst case stays linear.

use crate::error::{Error, Result};
use crate::point::{Point, PointSet};

const INSERTION_CUTOFF: usize = 16;

/// Returns the `k`-th smallest value (1-indexed).
pub fn select_kth(values: &[f64], k: usize) -> Result<f64> {
    if k == 0 || k > values.len() {
        return Err(Error::RankOutOfRange { k, len: values.len() });
    }
    let mut buf = values.to_vec();
    Ok(select_in_place(&mut buf, k - 1))
}

/// Lower median: the `ceil(len / 2)`-th smallest value.
pub fn median_1d(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("median of an empty sequence"));
    }
    select_kth(values, values.len().div_ceil(2))
}

/// Lower median computed in place; reorders `buf`.
pub(crate) fn median_in_place(buf: &mut [f64]) -> f64 {
    debug_assert!(!buf.is_empty());
    let idx = buf.len().div_ceil(2) - 1;
    select_in_place(buf, idx)
}

/// Per-axis lower median of the set.
pub fn coordinate_median(points: &PointSet) -> Point {
    let n = points.len();
    let dim = points.dim();
    let mut column = vec![0.0; n];
    let mut out = Vec::with_capacity(dim);
    for axis in 0..dim {
        for (slot, row) in column.iter_mut().zip(points.rows()) {
            *slot = row[axis];
        }
        out.push(median_in_place(&mut column));
    }
    Point::from_vec_unchecked(out)
}

/// Places the value of rank `idx` (0-indexed) at `buf[idx]` with everything
/// before it `<=` and everything after it `>=`, and returns it.
pub fn select_in_place(buf: &mut [f64], idx: usize) -> f64 {
    assert!(idx < buf.len(), "rank {idx} out of bounds for length {}", buf.len());
    let mut lo = 0;
    let mut hi = buf.len();
    let mut budget = 2 * (usize::BITS - buf.len().leading_zeros()) as usize;

    while hi - lo > INSERTION_CUTOFF {
        let pivot = if budget > 0 {
            budget -= 1;
            median_of_three(buf[lo], buf[lo + (hi - lo) / 2], buf[hi - 1])
        } else {
            median_of_medians(&buf[lo..hi])
        };
        let (lt, gt) = partition3(&mut buf[lo..hi], pivot);
        let (lt, gt) = (lo + lt, lo + gt);
        if idx < lt {
            hi = lt;
        } else if idx >= gt {
            lo = gt;
        } else {
            return pivot;
        }
    }
    insertion_sort(&mut buf[lo..hi]);
    buf[idx]
}

fn median_of_three(a: f64, b: f64, c: f64) -> f64 {
    if a < b {
        if b < c {
            b
        } else if a < c {
            c
        } else {
            a
        }
    } else if a < c {
        a
    } else if b < c {
        c
    } else {
        b
    }
}

/// Dutch-flag partition around `pivot`. Returns `(lt, gt)` such that
/// `[0, lt)` < pivot, `[lt, gt)` == pivot, `[gt, len)` > pivot.
fn partition3(buf: &mut [f64], pivot: f64) -> (usize, usize) {
    let mut lt = 0;
    let mut i = 0;
    let mut gt = buf.len();
    while i < gt {
        let x = buf[i];
        if x < pivot {
            buf.swap(lt, i);
            lt += 1;
            i += 1;
        } else if x > pivot {
            gt -= 1;
            buf.swap(i, gt);
        } else {
            i += 1;
        }
    }
    (lt, gt)
}

/// Deterministic pivot: median of the medians of groups of five.
fn median_of_medians(values: &[f64]) -> f64 {
    let mut medians: Vec<f64> = values
        .chunks(5)
        .map(|group| {
            let mut g = [0.0; 5];
            let g = &mut g[..group.len()];
            g.copy_from_slice(group);
            insertion_sort(g);
            g[(g.len() - 1) / 2]
        })
        .collect();
    let mid = (medians.len() - 1) / 2;
    select_in_place(&mut medians, mid)
}

fn insertion_sort(buf: &mut [f64]) {
    for i in 1..buf.len() {
        let x = buf[i];
        let mut j = i;
        while j > 0 && buf[j - 1] > x {
            buf[j] = buf[j - 1];
            j -= 1;
        }
        buf[j] = x;
    }
}
