use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::estimator::{resolve_config, run_estimator, Method, Overrides};
use crate::config::{EstimatorConfig, Preset, DEFAULT_CLUSTER_EXPONENT, DEFAULT_T_SLACK};
use crate::error::{Error, Result};
use crate::instances::{Instance, InstanceSpec};
use crate::point::is_eps_approx;
use crate::rng::Stream;

fn default_depth() -> usize {
    1
}

fn default_t_slack() -> usize {
    DEFAULT_T_SLACK
}

fn default_cluster_exponent() -> f64 {
    DEFAULT_CLUSTER_EXPONENT
}

/// Experiment description, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    pub estimators: Vec<Method>,
    pub eps: f64,
    pub delta: f64,
    #[serde(default)]
    pub preset: Preset,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_t_slack")]
    pub t_slack: usize,
    #[serde(default = "default_cluster_exponent")]
    pub cluster_exponent: f64,
    #[serde(default)]
    pub seed: u64,
    pub trials: usize,
    /// Sample size of the empirical-mean estimator; defaults to the batched budget.
    #[serde(default)]
    pub sample_size: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn estimator_config(&self, method: Method) -> Result<EstimatorConfig> {
        let overrides = Overrides {
            a: self.a,
            b: self.b,
            t_slack: Some(self.t_slack),
            cluster_exponent: Some(self.cluster_exponent),
        };
        resolve_config(method, self.preset, self.eps, self.delta, self.depth, self.seed, &overrides)
            .map_err(|e| Error::Config(e.to_string()))
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("estimators must not be empty".into()));
        }
        if self.sample_size == Some(0) {
            return Err(Error::Config("sample_size must be at least 1".into()));
        }
        Ok(())
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub estimator: Method,
    pub instance: String,
    pub eps: f64,
    pub delta: f64,
    pub samples: usize,
    pub approx_ratio: f64,
    pub success: bool,
    pub t_sample_ns: u64,
    pub t_agg_ns: u64,
}

impl TrialRecord {
    /// Equality of every field except the timings.
    pub fn same_statistics(&self, other: &TrialRecord) -> bool {
        self.trial_id == other.trial_id
            && self.estimator == other.estimator
            && self.instance == other.instance
            && self.eps.to_bits() == other.eps.to_bits()
            && self.delta.to_bits() == other.delta.to_bits()
            && self.samples == other.samples
            && self.approx_ratio.to_bits() == other.approx_ratio.to_bits()
            && self.success == other.success
    }
}

/// Aggregates for one estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSummary {
    pub estimator: Method,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub samples: usize,
    pub ratio_mean: f64,
    pub ratio_p50: f64,
    pub ratio_p90: f64,
    pub ratio_p99: f64,
    pub ratio_max: f64,
    pub t_sample_ns_mean: f64,
    pub t_sample_ns_median: u64,
    pub t_agg_ns_mean: f64,
    pub t_agg_ns_median: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub instance: String,
    pub n: usize,
    pub dim: usize,
    pub opt: f64,
    pub estimators: Vec<EstimatorSummary>,
}

impl ExperimentReport {
    pub fn summary(&self, method: Method) -> Option<&EstimatorSummary> {
        self.estimators.iter().find(|s| s.estimator == method)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    /// Ordered by trial id, then by position in `config.estimators`.
    pub records: Vec<TrialRecord>,
    pub report: ExperimentReport,
}

impl ExperimentOutput {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }

    /// Writes `trials.csv` and `report.json` into `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let csv_path = dir.join("trials.csv");
        fs::write(&csv_path, self.to_csv()?).map_err(|e| Error::io(&csv_path, e))?;
        let json_path = dir.join("report.json");
        let json = serde_json::to_string_pretty(&self.report).map_err(|e| Error::Format(e.to_string()))?;
        fs::write(&json_path, json + "\n").map_err(|e| Error::io(&json_path, e))
    }
}

/// Runs `config.trials` independent trials of every listed estimator on the
/// generated instance. Trial `t` uses `Stream::new(seed).substream(t)` for
/// every estimator, so all estimators see the same random draws per trial.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let instance = config.instance.generate().map_err(|e| Error::Config(e.to_string()))?;
    let configs: Vec<(Method, EstimatorConfig)> = config
        .estimators
        .iter()
        .map(|&m| config.estimator_config(m).map(|c| (m, c)))
        .collect::<Result<_>>()?;
    let root = Stream::new(config.seed);
    let trial = |t: usize| run_trial(config, &instance, &configs, root.substream(t as u64), t as u64);

    #[cfg(feature = "parallel")]
    let per_trial: Vec<Vec<TrialRecord>> = {
        use rayon::prelude::*;
        (0..config.trials).into_par_iter().map(trial).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let per_trial: Vec<Vec<TrialRecord>> = (0..config.trials).map(trial).collect::<Result<_>>()?;

    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();
    let estimators = config
        .estimators
        .iter()
        .map(|&m| summarize(m, records.iter().filter(|r| r.estimator == m)))
        .collect();
    let report = ExperimentReport {
        config: config.clone(),
        seed: config.seed,
        instance: instance.spec.kind().to_string(),
        n: instance.points.len(),
        dim: instance.points.dim(),
        opt: instance.oracle.opt,
        estimators,
    };
    Ok(ExperimentOutput { records, report })
}

fn run_trial(
    config: &ExperimentConfig,
    instance: &Instance,
    configs: &[(Method, EstimatorConfig)],
    stream: Stream,
    trial_id: u64,
) -> Result<Vec<TrialRecord>> {
    configs
        .iter()
        .map(|(method, cfg)| {
            let r = run_estimator(*method, &instance.points, cfg, stream, config.sample_size, false)?;
            let c = r.estimate.coords();
            Ok(TrialRecord {
                trial_id,
                estimator: *method,
                instance: instance.spec.kind().to_string(),
                eps: config.eps,
                delta: config.delta,
                samples: r.samples,
                approx_ratio: instance.oracle.approx_ratio(c),
                success: is_eps_approx(&instance.oracle, c, config.eps),
                t_sample_ns: r.t_sample_ns,
                t_agg_ns: r.t_agg_ns,
            })
        })
        .collect()
}

/// Nearest-rank percentile of sorted data.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

fn median_u64(mut v: Vec<u64>) -> u64 {
    v.sort_unstable();
    v[(v.len() - 1) / 2]
}

fn summarize<'a>(method: Method, records: impl Iterator<Item = &'a TrialRecord>) -> EstimatorSummary {
    let records: Vec<&TrialRecord> = records.collect();
    let n = records.len();
    let successes = records.iter().filter(|r| r.success).count();
    let mut ratios: Vec<f64> = records.iter().map(|r| r.approx_ratio).collect();
    let ratio_mean = crate::sum::pairwise_sum(&ratios) / n as f64;
    ratios.sort_by(f64::total_cmp);
    let ts: Vec<u64> = records.iter().map(|r| r.t_sample_ns).collect();
    let ta: Vec<u64> = records.iter().map(|r| r.t_agg_ns).collect();
    let mean_u64 = |v: &[u64]| v.iter().map(|&x| x as f64).sum::<f64>() / n as f64;
    EstimatorSummary {
        estimator: method,
        trials: n,
        successes,
        success_rate: successes as f64 / n as f64,
        samples: records[0].samples,
        ratio_mean,
        ratio_p50: percentile(&ratios, 0.5),
        ratio_p90: percentile(&ratios, 0.9),
        ratio_p99: percentile(&ratios, 0.99),
        ratio_max: ratios[n - 1],
        t_sample_ns_mean: mean_u64(&ts),
        t_sample_ns_median: median_u64(ts),
        t_agg_ns_mean: mean_u64(&ta),
        t_agg_ns_median: median_u64(ta),
    }
}
