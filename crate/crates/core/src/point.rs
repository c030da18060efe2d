//! Points, point sets, and the exact mean/cost oracles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::{pairwise_column_sums, pairwise_sum_by};

/// A point in R^d with finite coordinates, d >= 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty("point has no coordinates"));
        }
        if let Some(axis) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { point: 0, axis });
        }
        Ok(Point(coords))
    }

    /// Wraps coordinates produced by arithmetic on already-valid points.
    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Point(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A nonempty set of `n` points in R^d, stored row-major. Serialized as a
/// list of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct PointSet {
    dim: usize,
    data: Vec<f64>,
}

impl TryFrom<Vec<Vec<f64>>> for PointSet {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        PointSet::from_rows(&rows)
    }
}

impl From<PointSet> for Vec<Vec<f64>> {
    fn from(p: PointSet) -> Self {
        p.rows().map(<[f64]>::to_vec).collect()
    }
}

impl PointSet {
    /// Builds a set from a row-major buffer of `n * dim` coordinates.
    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if data.is_empty() {
            return Err(Error::Empty("point set"));
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::invalid(format!(
                "{} coordinates do not divide into rows of dimension {dim}",
                data.len()
            )));
        }
        if let Some(idx) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { point: idx / dim, axis: idx % dim });
        }
        Ok(PointSet { dim, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty("point set"))?;
        let dim = first.as_ref().len();
        let mut data = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(dim, data)
    }

    /// One-dimensional convenience constructor.
    pub fn from_scalars(values: &[f64]) -> Result<Self> {
        Self::from_flat(1, values.to_vec())
    }

    pub(crate) fn from_flat_unchecked(dim: usize, data: Vec<f64>) -> Self {
        debug_assert!(dim > 0 && !data.is_empty() && data.len().is_multiple_of(dim));
        PointSet { dim, data }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn point(&self, i: usize) -> Point {
        Point(self.row(i).to_vec())
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Copies the selected rows, in order, into a new set.
    pub fn subset(&self, indices: &[usize]) -> Result<PointSet> {
        if indices.is_empty() {
            return Err(Error::Empty("subset"));
        }
        let mut data = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Ok(PointSet::from_flat_unchecked(self.dim, data))
    }

    fn check_dim(&self, c: &[f64]) -> Result<()> {
        if c.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: c.len() });
        }
        Ok(())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sq_norm(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

/// Coordinate-wise average of the set.
pub fn mean(points: &PointSet) -> Point {
    Point(mean_of_flat(points.as_flat(), points.dim()))
}

/// Mean of the rows of a nonempty row-major buffer.
pub(crate) fn mean_of_flat(data: &[f64], dim: usize) -> Vec<f64> {
    let n = (data.len() / dim) as f64;
    let mut sums = pairwise_column_sums(data, dim);
    for s in &mut sums {
        *s /= n;
    }
    sums
}

/// Sum of squared distances from every point of the set to `c`.
pub fn cost(points: &PointSet, c: &[f64]) -> Result<f64> {
    points.check_dim(c)?;
    Ok(pairwise_sum_by(points.len(), |i| sq_dist(points.row(i), c)))
}

/// Evaluates both sides of the mean-variance decomposition
/// `cost(A, c) = cost(A, mean(A)) + n * |mean(A) - c|^2`.
pub fn decomposition_check(points: &PointSet, c: &[f64]) -> Result<(f64, f64)> {
    let lhs = cost(points, c)?;
    let mu = mean(points);
    let opt = cost(points, mu.coords())?;
    let rhs = opt + points.len() as f64 * sq_dist(mu.coords(), c);
    Ok((lhs, rhs))
}

/// Relative width of the band just inside the `(1 + eps)` boundary that is
/// still counted as failure. A candidate exactly on the boundary costs
/// `(1 + eps) * OPT` and does not improve on the target ratio.
pub const BOUNDARY_REL: f64 = 1e-9;

/// Exact mean and optimal cost of a ground set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostOracle {
    pub mean: Point,
    pub opt: f64,
    pub n: usize,
}

impl CostOracle {
    /// Computes the oracle by direct (pairwise) evaluation over the set.
    pub fn exact(points: &PointSet) -> Self {
        let mean = mean(points);
        let opt = pairwise_sum_by(points.len(), |i| sq_dist(points.row(i), mean.coords()));
        CostOracle { mean, opt, n: points.len() }
    }

    /// Oracle from closed-form values, e.g. for generated lower-bound instances.
    pub fn from_parts(mean: Point, opt: f64, n: usize) -> Result<Self> {
        if !(opt >= 0.0 && opt.is_finite()) {
            return Err(Error::invalid(format!("OPT must be finite and nonnegative, got {opt}")));
        }
        if n == 0 {
            return Err(Error::Empty("oracle with n = 0"));
        }
        Ok(CostOracle { mean, opt, n })
    }

    pub fn dim(&self) -> usize {
        self.mean.dim()
    }

    /// The squared radius `eps * OPT / n` of the `(1 + eps)`-approximation ball.
    pub fn sq_radius(&self, eps: f64) -> f64 {
        eps * self.opt / self.n as f64
    }

    /// `cost(A, c) / OPT`, evaluated through the decomposition as
    /// `1 + n |c - mean|^2 / OPT` so that no pass over the ground set is needed.
    /// Returns infinity when OPT is zero and `c` is not the mean.
    pub fn approx_ratio(&self, c: &[f64]) -> f64 {
        let excess = self.n as f64 * sq_dist(c, self.mean.coords());
        if self.is_numerically_mean(c) {
            1.0
        } else if self.opt > 0.0 {
            1.0 + excess / self.opt
        } else {
            f64::INFINITY
        }
    }

    fn is_numerically_mean(&self, c: &[f64]) -> bool {
        let scale = f64::EPSILON * (1.0 + sq_norm(self.mean.coords()).sqrt());
        sq_dist(c, self.mean.coords()) <= 16.0 * scale * scale
    }
}

/// Whether `c` is a `(1 + eps)`-approximate mean, i.e.
/// `|c - mean|^2 <= eps * OPT / n`, with the boundary itself treated as failure.
pub fn is_eps_approx(oracle: &CostOracle, c: &[f64], eps: f64) -> bool {
    debug_assert!(eps > 0.0);
    let d2 = sq_dist(c, oracle.mean.coords());
    d2 <= oracle.sq_radius(eps) * (1.0 - BOUNDARY_REL) || oracle.is_numerically_mean(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point_instance() -> PointSet {
        let mut v = vec![0.0; 100];
        v.extend(std::iter::repeat_n(1.0, 50));
        PointSet::from_scalars(&v).unwrap()
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean(&PointSet::from_scalars(&[0.0, 2.0]).unwrap()).coords(), &[1.0]);
        assert_eq!(mean(&PointSet::from_rows(&[[3.0, 4.0]]).unwrap()).coords(), &[3.0, 4.0]);
        let m = mean(&two_point_instance());
        assert!((m.coords()[0] - 0.5 / 1.5).abs() < 1e-15);
    }

    #[test]
    fn empty_and_invalid_sets_rejected() {
        assert!(matches!(PointSet::from_scalars(&[]), Err(Error::Empty(_))));
        assert!(matches!(PointSet::from_flat(0, vec![1.0]), Err(Error::InvalidParameter(_))));
        assert!(matches!(
            PointSet::from_flat(2, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { point: 0, axis: 1 })
        ));
        assert!(matches!(
            PointSet::from_rows(&[vec![1.0, 2.0], vec![1.0]]),
            Err(Error::DimensionMismatch { expected: 2, actual: 1 })
        ));
        assert!(Point::new(vec![f64::INFINITY]).is_err());
        assert!(Point::new(vec![]).is_err());
    }

    #[test]
    fn cost_examples() {
        let a = PointSet::from_scalars(&[0.0, 2.0]).unwrap();
        assert_eq!(cost(&a, &[3.0]).unwrap(), 10.0);
        assert_eq!(cost(&a, &[1.0]).unwrap(), 2.0);
        let b = two_point_instance();
        let c = cost(&b, mean(&b).coords()).unwrap();
        assert!((c - 100.0 / 3.0).abs() < 1e-12);
        assert!(matches!(cost(&a, &[1.0, 2.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn decomposition_examples() {
        let a = PointSet::from_scalars(&[0.0, 2.0]).unwrap();
        assert_eq!(decomposition_check(&a, &[3.0]).unwrap(), (10.0, 10.0));
        let (lhs, rhs) = decomposition_check(&a, &[1.0]).unwrap();
        assert_eq!((lhs, rhs), (2.0, 2.0));
        assert!(decomposition_check(&a, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn eps_approx_examples() {
        let b = two_point_instance();
        let oracle = CostOracle::exact(&b);
        assert!(is_eps_approx(&oracle, oracle.mean.coords(), 1e-6));
        // Outputting 0 costs exactly (1 + eps) OPT: not an improvement.
        assert!(!is_eps_approx(&oracle, &[0.0], 0.5));
        let ratio = cost(&b, &[0.0]).unwrap() / oracle.opt;
        assert!((ratio - 1.5).abs() < 1e-12);
    }

    #[test]
    fn eps_approx_at_twice_the_radius_is_false() {
        let a = PointSet::from_rows(&[[0.3, -1.2], [2.0, 0.5], [-0.7, 0.9]]).unwrap();
        let oracle = CostOracle::exact(&a);
        let eps = 0.25;
        let radius = oracle.sq_radius(eps).sqrt();
        let dir = [0.6, 0.8];
        let at = |scale: f64| -> Vec<f64> {
            oracle.mean.coords().iter().zip(dir).map(|(m, u)| m + scale * radius * u).collect()
        };
        assert!(!is_eps_approx(&oracle, &at(2.0), eps));
        assert!(is_eps_approx(&oracle, &at(0.99), eps));
    }

    #[test]
    fn zero_opt_oracle() {
        let a = PointSet::from_rows(&[[0.5, 0.25]; 3]).unwrap();
        let oracle = CostOracle::exact(&a);
        assert_eq!(oracle.opt, 0.0);
        assert!(is_eps_approx(&oracle, &[0.5, 0.25], 0.1));
        assert_eq!(oracle.approx_ratio(&[0.5, 0.25]), 1.0);
        assert!(!is_eps_approx(&oracle, &[0.5, 0.3], 0.1));
        assert_eq!(oracle.approx_ratio(&[0.5, 0.3]), f64::INFINITY);
        // Rounding in the mean of 0.1s must not turn the mean itself into a failure.
        let b = PointSet::from_rows(&[[0.1, 0.2]; 3]).unwrap();
        let oracle = CostOracle::exact(&b);
        assert!(is_eps_approx(&oracle, &[0.1, 0.2], 0.1));
        assert_eq!(oracle.approx_ratio(&[0.1, 0.2]), 1.0);
    }

    #[test]
    fn point_serde_rejects_nan_like_input() {
        let p: Point = serde_json::from_str("[1.0, 2.5]").unwrap();
        assert_eq!(p.coords(), &[1.0, 2.5]);
        assert!(serde_json::from_str::<Point>("[]").is_err());
        let set: PointSet = serde_json::from_str("[[1, 2], [3, 4]]").unwrap();
        assert_eq!(set.row(1), &[3.0, 4.0]);
        assert_eq!(serde_json::to_string(&set).unwrap(), "[[1.0,2.0],[3.0,4.0]]");
        assert!(serde_json::from_str::<PointSet>("[[1, 2], [3]]").is_err());
        assert!(serde_json::from_str::<PointSet>("[]").is_err());
    }
}
