//! Estimator tunables and constant presets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// FastGD / geometric-median-of-means constants from the analysis.
pub const PAPER_GD_A: f64 = 1440.0;
pub const PAPER_GD_B: f64 = 50.0;
/// MinSumSelect batch-count constant.
pub const PAPER_MINSUM_B: f64 = 3.0;
/// Reduced constants used for Monte Carlo experiments.
pub const PRACTICAL_A: f64 = 40.0;
pub const PRACTICAL_B: f64 = 10.0;

pub const DEFAULT_T_SLACK: usize = 2;
pub const DEFAULT_CLUSTER_EXPONENT: f64 = 0.5;

/// Which constant set to use for `a` (batch size) and `b` (batch count).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Paper,
    #[default]
    Practical,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Preset::Paper),
            "practical" => Ok(Preset::Practical),
            other => Err(Error::Config(format!("unknown preset {other:?}"))),
        }
    }
}

/// `a >= 2 * 25^(i+1) * (10/3)^(i+1)`, rounded up, for MinSumSelect at depth `i`.
pub fn minsum_paper_a(depth: usize) -> f64 {
    (2.0 * (250.0f64 / 3.0).powi(depth as i32 + 1)).ceil()
}

/// All tunables of one estimator run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub eps: f64,
    pub delta: f64,
    /// Batch-size constant: each batch has `ceil(a / eps)` samples.
    pub a: f64,
    /// Batch-count constant: `ceil(b * ln(1 / delta))` batches.
    pub b: f64,
    pub seed: u64,
    /// Extra FastGD iterations on top of the derived count.
    pub t_slack: usize,
    /// MinSumSelect recursion depth.
    pub depth: usize,
    /// MinSumSelect splits a level of size `k` into `ceil(k^cluster_exponent)` clusters.
    pub cluster_exponent: f64,
}

impl EstimatorConfig {
    pub fn new(eps: f64, delta: f64, a: f64, b: f64) -> Result<Self> {
        let cfg = EstimatorConfig {
            eps,
            delta,
            a,
            b,
            seed: 0,
            t_slack: DEFAULT_T_SLACK,
            depth: 1,
            cluster_exponent: DEFAULT_CLUSTER_EXPONENT,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Practical constants `a = 40`, `b = 10`.
    pub fn practical(eps: f64, delta: f64) -> Result<Self> {
        Self::new(eps, delta, PRACTICAL_A, PRACTICAL_B)
    }

    /// Constants from the analysis: `a = 1440`, `b = 50` (FastGD and the
    /// geometric median-of-means baseline).
    pub fn paper_gd(eps: f64, delta: f64) -> Result<Self> {
        Self::new(eps, delta, PAPER_GD_A, PAPER_GD_B)
    }

    /// Constants for MinSumSelect at the given depth: `a = ceil(2 (250/3)^(i+1))`, `b = 3`.
    pub fn paper_minsum(eps: f64, delta: f64, depth: usize) -> Result<Self> {
        let mut cfg = Self::new(eps, delta, minsum_paper_a(depth), PAPER_MINSUM_B)?;
        cfg.depth = depth;
        Ok(cfg)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::invalid(format!("eps must be positive, got {}", self.eps)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if !(self.a >= 1.0 && self.a.is_finite()) {
            return Err(Error::invalid(format!("a must be >= 1, got {}", self.a)));
        }
        if !(self.b >= 1.0 && self.b.is_finite()) {
            return Err(Error::invalid(format!("b must be >= 1, got {}", self.b)));
        }
        if !(self.cluster_exponent > 0.0 && self.cluster_exponent < 1.0) {
            return Err(Error::invalid(format!(
                "cluster_exponent must lie in (0, 1), got {}",
                self.cluster_exponent
            )));
        }
        Ok(())
    }

    /// Number of batches `m = max(1, ceil(b * ln(1 / delta)))`.
    pub fn batch_count(&self) -> usize {
        ((self.b * (1.0 / self.delta).ln()).ceil() as usize).max(1)
    }

    /// Batch size `s = ceil(a / eps)`.
    pub fn batch_size(&self) -> usize {
        ((self.a / self.eps).ceil() as usize).max(1)
    }

    pub fn total_samples(&self) -> usize {
        self.batch_count() * self.batch_size()
    }
}
