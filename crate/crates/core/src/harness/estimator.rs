use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{weiszfeld, WeiszfeldStatus, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::config::{EstimatorConfig, Preset};
use crate::error::{Error, Result};
use crate::gd::{fastgd, GdTrace};
use crate::minsum::minsum_estimate;
use crate::point::{Point, PointSet};
use crate::rng::Stream;
use crate::sampling::{draw_candidate_means, empirical_mean_estimate};
use crate::select::coordinate_median;

/// Estimators runnable by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Candidate means aggregated by FastGD.
    Fastgd,
    /// Candidate means aggregated by MinSumSelect.
    Minsum,
    /// Geometric median-of-means via Weiszfeld.
    Gmom,
    /// Plain mean of one uniform sample.
    Empirical,
    /// Coordinate-wise median-of-means.
    Coordmed,
}

impl Method {
    pub const ALL: [Method; 5] =
        [Method::Fastgd, Method::Minsum, Method::Gmom, Method::Empirical, Method::Coordmed];

    pub fn name(self) -> &'static str {
        match self {
            Method::Fastgd => "fastgd",
            Method::Minsum => "minsum",
            Method::Gmom => "gmom",
            Method::Empirical => "empirical",
            Method::Coordmed => "coordmed",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown estimator {s:?}")))
    }
}

/// Optional replacements for preset-derived tunables.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Overrides {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub t_slack: Option<usize>,
    pub cluster_exponent: Option<f64>,
}

/// Tunables for `method` under `preset`. The paper preset picks the
/// MinSumSelect constants for `minsum` and the FastGD constants otherwise.
pub fn resolve_config(
    method: Method,
    preset: Preset,
    eps: f64,
    delta: f64,
    depth: usize,
    seed: u64,
    overrides: &Overrides,
) -> Result<EstimatorConfig> {
    let mut cfg = match (preset, method) {
        (Preset::Practical, _) => EstimatorConfig::practical(eps, delta)?,
        (Preset::Paper, Method::Minsum) => EstimatorConfig::paper_minsum(eps, delta, depth)?,
        (Preset::Paper, _) => EstimatorConfig::paper_gd(eps, delta)?,
    };
    cfg.depth = depth;
    cfg.seed = seed;
    if let Some(a) = overrides.a {
        cfg.a = a;
    }
    if let Some(b) = overrides.b {
        cfg.b = b;
    }
    if let Some(t) = overrides.t_slack {
        cfg.t_slack = t;
    }
    if let Some(x) = overrides.cluster_exponent {
        cfg.cluster_exponent = x;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// One estimator run with its phase timings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub method: Method,
    pub estimate: Point,
    /// Total number of uniform draws.
    pub samples: usize,
    /// Number of candidate means (1 for the empirical mean).
    pub m: usize,
    pub batch_size: usize,
    pub t_sample_ns: u64,
    pub t_agg_ns: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fastgd: Option<GdTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weiszfeld: Option<WeiszfeldStatus>,
    /// Candidate means, kept only when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<PointSet>,
}

/// Monotonic phase timer. The browser target has no monotonic clock in
/// `std`, so phases read as 0 ns there.
struct Timer(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Timer {
    fn start() -> Self {
        Timer(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    fn ns(&self) -> u64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed().as_nanos().min(u64::MAX as u128) as u64;
        #[cfg(target_arch = "wasm32")]
        return 0;
    }
}

/// Runs `method` on `points`. The empirical mean draws `sample_size` points,
/// defaulting to the `m s` budget of the batched estimators.
pub fn run_estimator(
    method: Method,
    points: &PointSet,
    cfg: &EstimatorConfig,
    stream: Stream,
    sample_size: Option<usize>,
    keep_candidates: bool,
) -> Result<EstimateReport> {
    cfg.validate()?;
    if method == Method::Empirical {
        let size = sample_size.unwrap_or_else(|| cfg.total_samples());
        let start = Timer::start();
        let estimate = empirical_mean_estimate(points, size, stream)?;
        return Ok(EstimateReport {
            method,
            estimate,
            samples: size,
            m: 1,
            batch_size: size,
            t_sample_ns: start.ns(),
            t_agg_ns: 0,
            fastgd: None,
            weiszfeld: None,
            candidates: None,
        });
    }

    let start = Timer::start();
    let cands = draw_candidate_means(points, cfg, stream);
    let t_sample_ns = start.ns();

    let start = Timer::start();
    let (estimate, fastgd_trace, status) = match method {
        Method::Fastgd => {
            let (p, trace) = fastgd(&cands.means, cfg);
            (p, Some(trace), None)
        }
        Method::Minsum => (minsum_estimate(&cands.means, cfg), None, None),
        Method::Gmom => {
            let r = weiszfeld(&cands.means, DEFAULT_TOL, DEFAULT_MAX_ITER);
            (r.point, None, Some(r.status))
        }
        Method::Coordmed => (coordinate_median(&cands.means), None, None),
        Method::Empirical => unreachable!(),
    };
    let t_agg_ns = start.ns();

    Ok(EstimateReport {
        method,
        estimate,
        samples: cands.total_samples(),
        m: cands.m(),
        batch_size: cands.batch_size,
        t_sample_ns,
        t_agg_ns,
        fastgd: fastgd_trace,
        weiszfeld: status,
        candidates: keep_candidates.then_some(cands.means),
    })
}
