//! Reference estimators: Weiszfeld geometric median, geometric
//! median-of-means, and coordinate-wise median-of-means.

use serde::{Deserialize, Serialize};

use crate::config::EstimatorConfig;
use crate::gd::{colocation_tolerance, gradient_tolerance};
use crate::point::{dist, sq_norm, Point, PointSet};
use crate::rng::Stream;
use crate::sampling::draw_candidate_means;
use crate::select::coordinate_median;

pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeiszfeldStatus {
    /// Gradient below tolerance, or the iterate sits on an input point whose
    /// multiplicity dominates the remaining gradient (a zero subgradient).
    Certified,
    /// Relative movement fell below `tol` before the gradient test passed.
    Stalled,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeiszfeldResult {
    pub point: Point,
    pub iterations: usize,
    pub status: WeiszfeldStatus,
    /// Norm of the gradient over non-co-located points at the returned point.
    pub gradient_norm: f64,
    /// Objective `sum |p - x_k|` at every visited iterate.
    pub objective: Vec<f64>,
}

struct Probe {
    objective: f64,
    /// Number of inputs co-located with the iterate.
    colocated: usize,
    weight: f64,
    weighted: Vec<f64>,
    grad: Vec<f64>,
}

fn probe(x: &[f64], points: &PointSet) -> Probe {
    let tau = colocation_tolerance(x);
    let mut out = Probe {
        objective: 0.0,
        colocated: 0,
        weight: 0.0,
        weighted: vec![0.0; x.len()],
        grad: vec![0.0; x.len()],
    };
    for p in points.rows() {
        let d = dist(x, p);
        out.objective += d;
        if d < tau {
            out.colocated += 1;
            continue;
        }
        let w = 1.0 / d;
        out.weight += w;
        for (((acc, g), pi), xi) in out.weighted.iter_mut().zip(&mut out.grad).zip(p).zip(x) {
            *acc += w * pi;
            *g += w * (xi - pi);
        }
    }
    out
}

/// Zero lies in the subdifferential: the gradient over the other points is
/// at most the number of co-located points, up to `tau_grad`.
fn is_certified(r: f64, colocated: usize, tau_grad: f64) -> bool {
    r < tau_grad + colocated as f64
}

/// Weiszfeld iteration from the coordinate-wise median, with the Vardi-Zhang
/// modification when the iterate lands on an input point.
pub fn weiszfeld(points: &PointSet, tol: f64, max_iter: usize) -> WeiszfeldResult {
    let m = points.len();
    let tau_grad = gradient_tolerance(m);
    let mut x = coordinate_median(points).into_vec();
    let mut objective = Vec::new();
    let mut iterations = 0;

    loop {
        let pr = probe(&x, points);
        objective.push(pr.objective);
        let r = sq_norm(&pr.grad).sqrt();
        if is_certified(r, pr.colocated, tau_grad) || pr.weight == 0.0 {
            return done(x, iterations, WeiszfeldStatus::Certified, r, objective);
        }
        if iterations >= max_iter {
            return done(x, iterations, WeiszfeldStatus::MaxIterations, r, objective);
        }

        let target: Vec<f64> = pr.weighted.iter().map(|v| v / pr.weight).collect();
        let next: Vec<f64> = if pr.colocated == 0 {
            target
        } else {
            let keep = (pr.colocated as f64 / r).min(1.0);
            target.iter().zip(&x).map(|(t, xi)| (1.0 - keep) * t + keep * xi).collect()
        };
        let moved = dist(&next, &x);
        let scale = pr.objective / m as f64;
        x = next;
        iterations += 1;
        if moved <= tol * scale {
            let pr = probe(&x, points);
            objective.push(pr.objective);
            let r = sq_norm(&pr.grad).sqrt();
            if is_certified(r, pr.colocated, tau_grad) {
                return done(x, iterations, WeiszfeldStatus::Certified, r, objective);
            }
            // Convergence to an optimal input point is sublinear: try snapping.
            let nearest = points
                .rows()
                .min_by(|a, b| dist(a, &x).total_cmp(&dist(b, &x)))
                .expect("nonempty point set");
            let snap = probe(nearest, points);
            let rs = sq_norm(&snap.grad).sqrt();
            if is_certified(rs, snap.colocated, tau_grad) {
                objective.push(snap.objective);
                return done(nearest.to_vec(), iterations, WeiszfeldStatus::Certified, rs, objective);
            }
            return done(x, iterations, WeiszfeldStatus::Stalled, r, objective);
        }
    }
}

fn done(
    x: Vec<f64>,
    iterations: usize,
    status: WeiszfeldStatus,
    gradient_norm: f64,
    objective: Vec<f64>,
) -> WeiszfeldResult {
    WeiszfeldResult { point: Point::from_vec_unchecked(x), iterations, status, gradient_norm, objective }
}

/// Algorithm-1 candidate means aggregated by their (Weiszfeld) geometric median.
pub fn geometric_median_of_means(
    points: &PointSet,
    cfg: &EstimatorConfig,
    stream: Stream,
) -> WeiszfeldResult {
    let cands = draw_candidate_means(points, cfg, stream);
    weiszfeld(&cands.means, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// Candidate means aggregated by their coordinate-wise median.
pub fn coordinate_median_of_means(points: &PointSet, cfg: &EstimatorConfig, stream: Stream) -> Point {
    let cands = draw_candidate_means(points, cfg, stream);
    coordinate_median(&cands.means)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::select::median_1d;
    use proptest::prelude::*;

    fn run(p: &PointSet) -> WeiszfeldResult {
        weiszfeld(p, DEFAULT_TOL, DEFAULT_MAX_ITER)
    }

    #[test]
    fn single_point() {
        let p = PointSet::from_rows(&[[1.0, 2.0]]).unwrap();
        let r = run(&p);
        assert_eq!(r.point.coords(), &[1.0, 2.0]);
        assert_eq!(r.status, WeiszfeldStatus::Certified);
    }

    #[test]
    fn symmetric_cross() {
        let p = PointSet::from_rows(&[[-1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]).unwrap();
        assert_eq!(run(&p).point.coords(), &[0.0, 0.0]);
    }

    #[test]
    fn doubled_point_is_the_median() {
        let p = PointSet::from_scalars(&[0.0, 0.0, 10.0]).unwrap();
        let r = run(&p);
        assert_eq!(r.point.coords(), &[0.0]);
        assert_eq!(r.status, WeiszfeldStatus::Certified);
    }

    #[test]
    fn identical_candidates() {
        let p = PointSet::from_rows(&[[3.0, 3.0]; 6]).unwrap();
        let r = run(&p);
        assert_eq!(r.point.coords(), &[3.0, 3.0]);
        assert!(r.iterations <= 1);
    }

    #[test]
    fn escapes_a_non_optimal_data_point() {
        // The coordinate median (0, 0) is an input point but not the geometric median.
        let p = PointSet::from_rows(&[[0.0, 0.0], [10.0, 0.1], [10.0, -0.1], [0.0, 5.0], [12.0, 0.0]])
            .unwrap();
        let r = run(&p);
        assert_eq!(r.status, WeiszfeldStatus::Certified);
        assert!(dist(r.point.coords(), &[0.0, 0.0]) > 1.0);
    }

    #[test]
    fn triangle_fermat_point() {
        // Equilateral triangle: the geometric median is the centroid.
        let h = 3f64.sqrt() / 2.0;
        let p = PointSet::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.5, h]]).unwrap();
        let r = run(&p);
        assert!(dist(r.point.coords(), &[0.5, h / 3.0]) < 1e-8);
    }

    fn point_sets() -> impl Strategy<Value = PointSet> {
        (1usize..5, 1usize..40).prop_flat_map(|(d, n)| {
            prop::collection::vec(-20.0f64..20.0, n * d)
                .prop_map(move |data| PointSet::from_flat(d, data).unwrap())
        })
    }

    proptest! {
        #[test]
        fn objective_never_increases(p in point_sets()) {
            let r = run(&p);
            for w in r.objective.windows(2) {
                prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12, "{} -> {}", w[0], w[1]);
            }
        }

        #[test]
        fn one_dimensional_matches_median(v in prop::collection::vec(-100.0f64..100.0, 1..50)) {
            let p = PointSet::from_scalars(&v).unwrap();
            let r = run(&p);
            let med = median_1d(&v).unwrap();
            let range = v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
            prop_assert!((r.point.coords()[0] - med).abs() <= 1e-9 * range.max(1.0));
        }

        #[test]
        fn terminates_certified_or_flagged(p in point_sets()) {
            let r = run(&p);
            prop_assert_ne!(r.status, WeiszfeldStatus::Stalled, "gradient {}", r.gradient_norm);
        }
    }
}
