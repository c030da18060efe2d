//! FastGD: gradient descent on the geometric-median objective over the
//! candidate means, with an exact line search given by the 1-D median of the
//! candidates projected onto the descent line.

use serde::{Deserialize, Serialize};

use crate::config::EstimatorConfig;
use crate::error::{Error, Result};
use crate::point::{dot, sq_norm, Point, PointSet};
use crate::select::{coordinate_median, median_in_place};

/// Contraction factor of one step while the iterate is far from the mean.
pub const CONTRACTION: f64 = 0.7;

/// Candidates closer than this to `q` are left out of the gradient sum.
pub fn colocation_tolerance(q: &[f64]) -> f64 {
    1e-12 * (1.0 + sq_norm(q).sqrt())
}

/// Gradient norm below which the iterate is accepted as a geometric median.
pub fn gradient_tolerance(m: usize) -> f64 {
    1e-9 * m as f64
}

/// `ceil(ln(max(2, m)) / ln(1 / 0.7)) + t_slack`: enough 0.7-contractions to
/// shrink the initial `m r` error of the coordinate median below `r`.
pub fn iteration_count(m: usize, t_slack: usize) -> usize {
    let m = m.max(2) as f64;
    (m.ln() / (1.0 / CONTRACTION).ln()).ceil() as usize + t_slack
}

/// Record of one FastGD run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GdTrace {
    /// `c_0, c_1, ...`; `c_0` is the coordinate-wise median.
    pub iterates: Vec<Point>,
    /// Gradient norm evaluated at each iterate that was stepped from (plus the
    /// final one when the run stopped early).
    pub gradient_norms: Vec<f64>,
    /// Median projection scalar chosen at each step: `c_j = c_{j-1} - s_j grad`.
    pub step_scalars: Vec<f64>,
    pub planned_iterations: usize,
    pub terminated_early: bool,
}

/// Sum over candidates of the unit vectors `(q - p) / |q - p|`, skipping
/// candidates co-located with `q`. Accumulated in candidate order.
pub fn geo_median_gradient(q: &[f64], means: &PointSet) -> Vec<f64> {
    let mut grad = vec![0.0; q.len()];
    accumulate_gradient(q, means, &mut grad);
    grad
}

fn accumulate_gradient(q: &[f64], means: &PointSet, grad: &mut [f64]) {
    grad.fill(0.0);
    let tau = colocation_tolerance(q);
    for p in means.rows() {
        let d = crate::point::dist(q, p);
        if d < tau {
            continue;
        }
        let inv = 1.0 / d;
        for ((g, qi), pi) in grad.iter_mut().zip(q).zip(p) {
            *g += (qi - pi) * inv;
        }
    }
}

/// Projects every candidate onto the line `{c - s grad}` and returns the
/// point at the lower median of the projection scalars.
pub fn line_median_step(c: &[f64], grad: &[f64], means: &PointSet) -> Result<Point> {
    let g2 = sq_norm(grad);
    if g2.is_nan() || g2 <= 0.0 {
        return Err(Error::invalid("line step needs a nonzero gradient"));
    }
    let mut scalars = Vec::with_capacity(means.len());
    let mut diff = vec![0.0; c.len()];
    let (point, _) = step_with(c, grad, g2, means, &mut scalars, &mut diff);
    Ok(point)
}

fn step_with(
    c: &[f64],
    grad: &[f64],
    g2: f64,
    means: &PointSet,
    scalars: &mut Vec<f64>,
    diff: &mut [f64],
) -> (Point, f64) {
    scalars.clear();
    for p in means.rows() {
        for ((d, pi), ci) in diff.iter_mut().zip(p).zip(c) {
            *d = pi - ci;
        }
        scalars.push(-dot(diff, grad) / g2);
    }
    let s = median_in_place(scalars);
    let next = c.iter().zip(grad).map(|(ci, gi)| ci - s * gi).collect();
    (Point::from_vec_unchecked(next), s)
}

/// Runs FastGD from the coordinate-wise median for
/// [`iteration_count`]`(m, cfg.t_slack)` steps, stopping early once the
/// gradient norm falls below [`gradient_tolerance`].
pub fn fastgd(means: &PointSet, cfg: &EstimatorConfig) -> (Point, GdTrace) {
    let m = means.len();
    let planned = iteration_count(m, cfg.t_slack);
    let tau_grad = gradient_tolerance(m);

    let mut c = coordinate_median(means);
    let mut trace = GdTrace {
        iterates: vec![c.clone()],
        gradient_norms: Vec::with_capacity(planned),
        step_scalars: Vec::with_capacity(planned),
        planned_iterations: planned,
        terminated_early: false,
    };

    let mut grad = vec![0.0; means.dim()];
    let mut diff = vec![0.0; means.dim()];
    let mut scalars = Vec::with_capacity(m);
    for _ in 0..planned {
        accumulate_gradient(c.coords(), means, &mut grad);
        let g2 = sq_norm(&grad);
        let norm = g2.sqrt();
        trace.gradient_norms.push(norm);
        if norm < tau_grad {
            trace.terminated_early = true;
            break;
        }
        let (next, s) = step_with(c.coords(), &grad, g2, means, &mut scalars, &mut diff);
        trace.step_scalars.push(s);
        trace.iterates.push(next.clone());
        c = next;
    }
    (c, trace)
}

impl GdTrace {
    /// Copy without the iterate list, for compact JSON output.
    pub fn without_iterates(&self) -> GdTrace {
        GdTrace { iterates: Vec::new(), ..self.clone() }
    }
}
