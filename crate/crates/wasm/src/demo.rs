use serde::{Deserialize, Serialize};

use meanest::harness::{resolve_config, run_estimator, run_experiment, ExperimentConfig, Method, Overrides};
use meanest::instances::InstanceSpec;
use meanest::{is_eps_approx, Preset, Stream};

/// Most points sent back for drawing.
const MAX_DRAWN: usize = 3000;

fn parse<'a, T: Deserialize<'a>>(params: &'a str) -> Result<T, String> {
    serde_json::from_str(params).map_err(|e| format!("bad parameters: {e}"))
}

fn render<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn default_depth() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateParams {
    pub instance: InstanceSpec,
    pub eps: f64,
    pub delta: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default)]
    pub preset: Preset,
}

#[derive(Debug, Serialize)]
pub struct MethodResult {
    pub method: Method,
    pub estimate: Vec<f64>,
    pub approx_ratio: f64,
    pub success: bool,
    pub samples: usize,
}

#[derive(Debug, Serialize)]
pub struct EstimateAll {
    /// Up to `MAX_DRAWN` instance points, evenly strided.
    pub points: Vec<Vec<f64>>,
    pub n: usize,
    pub mean: Vec<f64>,
    /// `sqrt(eps OPT / n)`: estimates inside this circle are `(1 + eps)`-approximate.
    pub radius: f64,
    pub candidates: Vec<Vec<f64>>,
    /// FastGD iterates, starting at the coordinate-wise median.
    pub fastgd_path: Vec<Vec<f64>>,
    pub results: Vec<MethodResult>,
}

pub fn estimate_all(params: &str) -> Result<String, String> {
    let p: EstimateParams = parse(params)?;
    let inst = p.instance.generate().map_err(|e| e.to_string())?;
    if inst.points.dim() != 2 {
        return Err(format!("the demo draws 2-D instances, got dimension {}", inst.points.dim()));
    }
    let stream = Stream::new(p.seed);
    let mut results = Vec::new();
    let mut candidates = Vec::new();
    let mut fastgd_path = Vec::new();
    for method in Method::ALL {
        let cfg = resolve_config(method, p.preset, p.eps, p.delta, p.depth, p.seed, &Overrides::default())
            .map_err(|e| e.to_string())?;
        let r = run_estimator(method, &inst.points, &cfg, stream, None, method == Method::Fastgd)
            .map_err(|e| e.to_string())?;
        if let Some(c) = &r.candidates {
            candidates = c.rows().map(<[f64]>::to_vec).collect();
        }
        if let Some(trace) = &r.fastgd {
            fastgd_path = trace.iterates.iter().map(|q| q.coords().to_vec()).collect();
        }
        let c = r.estimate.coords();
        results.push(MethodResult {
            method,
            estimate: c.to_vec(),
            approx_ratio: inst.oracle.approx_ratio(c),
            success: is_eps_approx(&inst.oracle, c, p.eps),
            samples: r.samples,
        });
    }
    let n = inst.points.len();
    let stride = n.div_ceil(MAX_DRAWN);
    render(&EstimateAll {
        points: inst.points.rows().step_by(stride).map(<[f64]>::to_vec).collect(),
        n,
        mean: inst.oracle.mean.coords().to_vec(),
        radius: inst.oracle.sq_radius(p.eps).sqrt(),
        candidates,
        fastgd_path,
        results,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveParams {
    pub instance: InstanceSpec,
    pub estimators: Vec<Method>,
    pub eps: f64,
    pub deltas: Vec<f64>,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_depth")]
    pub depth: usize,
}

#[derive(Debug, Serialize)]
pub struct CurvePoint {
    pub delta: f64,
    pub method: Method,
    pub samples: usize,
    pub success_rate: f64,
}

pub fn success_curve(params: &str) -> Result<String, String> {
    let p: CurveParams = parse(params)?;
    let mut out = Vec::new();
    for &delta in &p.deltas {
        let config = ExperimentConfig {
            instance: p.instance.clone(),
            estimators: p.estimators.clone(),
            eps: p.eps,
            delta,
            preset: Preset::Practical,
            a: None,
            b: None,
            depth: p.depth,
            t_slack: meanest::config::DEFAULT_T_SLACK,
            cluster_exponent: meanest::config::DEFAULT_CLUSTER_EXPONENT,
            seed: p.seed,
            trials: p.trials,
            sample_size: None,
        };
        let report = run_experiment(&config).map_err(|e| e.to_string())?.report;
        out.extend(report.estimators.iter().map(|s| CurvePoint {
            delta,
            method: s.estimator,
            samples: s.samples,
            success_rate: s.success_rate,
        }));
    }
    render(&out)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureParams {
    pub eps: f64,
    pub sizes: Vec<usize>,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct FailurePoint {
    pub sample_size: usize,
    pub failure_rate: f64,
    /// `(1 / (S eps)) (1 - 1 / (S eps))`, the lower bound on the failure probability.
    pub bound: f64,
}

/// Instance size giving about 200 points per spike.
fn lb_total(sample_size: usize, eps: f64) -> usize {
    let s = sample_size as f64;
    (400.0 * s * s * eps).ceil() as usize
}

pub fn empirical_failure_curve(params: &str) -> Result<String, String> {
    let p: FailureParams = parse(params)?;
    let mut out = Vec::new();
    for &size in &p.sizes {
        let config = ExperimentConfig {
            instance: InstanceSpec::EmpiricalMeanLb { total: lb_total(size, p.eps), sample_size: size, eps: p.eps },
            estimators: vec![Method::Empirical],
            eps: p.eps,
            delta: 0.5,
            preset: Preset::Practical,
            a: None,
            b: None,
            depth: 1,
            t_slack: meanest::config::DEFAULT_T_SLACK,
            cluster_exponent: meanest::config::DEFAULT_CLUSTER_EXPONENT,
            seed: p.seed,
            trials: p.trials,
            sample_size: Some(size),
        };
        let report = run_experiment(&config).map_err(|e| e.to_string())?.report;
        let x = 1.0 / (size as f64 * p.eps);
        out.push(FailurePoint {
            sample_size: size,
            failure_rate: 1.0 - report.estimators[0].success_rate,
            bound: (x * (1.0 - x)).max(0.0),
        });
    }
    render(&out)
}
