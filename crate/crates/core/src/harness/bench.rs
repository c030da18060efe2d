use std::hint::black_box;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::EstimatorConfig;
use crate::error::{Error, Result};
use crate::gd::fastgd;
use crate::minsum::{compute_winner_index, minsum_select_index};
use crate::point::PointSet;
use crate::rng::Stream;

/// Aggregation phases timed by the scaling bench.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregator {
    ComputeWinner,
    MinsumDepth1,
    Fastgd,
}

impl Aggregator {
    pub const ALL: [Aggregator; 3] =
        [Aggregator::ComputeWinner, Aggregator::MinsumDepth1, Aggregator::Fastgd];

    pub fn name(self) -> &'static str {
        match self {
            Aggregator::ComputeWinner => "compute_winner",
            Aggregator::MinsumDepth1 => "minsum_depth1",
            Aggregator::Fastgd => "fastgd",
        }
    }

    fn run(self, cands: &PointSet, cfg: &EstimatorConfig) {
        match self {
            Aggregator::ComputeWinner => {
                black_box(compute_winner_index(black_box(cands)));
            }
            Aggregator::MinsumDepth1 => {
                black_box(minsum_select_index(black_box(cands), 1));
            }
            Aggregator::Fastgd => {
                black_box(fastgd(black_box(cands), cfg));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    /// Candidate counts `m`, strictly ascending.
    pub sizes: Vec<usize>,
    pub dim: usize,
    /// Timed repetitions per point; at least 5.
    pub reps: usize,
    pub seed: u64,
    /// Each repetition loops the call until at least this much time passes.
    pub min_rep_ns: u64,
    pub aggregators: Vec<Aggregator>,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            sizes: vec![256, 1024, 4096],
            dim: 16,
            reps: 5,
            seed: 0,
            min_rep_ns: 20_000_000,
            aggregators: Aggregator::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub aggregator: Aggregator,
    pub m: usize,
    pub dim: usize,
    /// Calls per repetition.
    pub inner: u64,
    /// Median over repetitions of the per-call time.
    pub median_ns: f64,
    pub min_ns: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub aggregator: Aggregator,
    /// Least-squares slope of `ln(time)` against `ln(m)`.
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub spec: BenchSpec,
    pub rows: Vec<BenchRow>,
    pub slopes: Vec<SlopeFit>,
}

impl BenchReport {
    pub fn slope(&self, aggregator: Aggregator) -> Option<f64> {
        self.slopes.iter().find(|s| s.aggregator == aggregator).map(|s| s.slope)
    }
}

/// Least-squares line through `(ln x, ln y)`; returns `(slope, intercept)`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn gaussian_candidates(m: usize, dim: usize, stream: Stream) -> PointSet {
    let mut rng = stream.rng();
    // Sum of uniforms: cheap, centered, and free of duplicate points.
    let data = (0..m * dim)
        .map(|_| (0..4).map(|_| rng.random::<f64>() - 0.5).sum::<f64>())
        .collect();
    PointSet::from_flat_unchecked(dim, data)
}

fn inner_loops(agg: Aggregator, cands: &PointSet, cfg: &EstimatorConfig, min_rep_ns: u64) -> u64 {
    agg.run(cands, cfg);
    let start = Instant::now();
    agg.run(cands, cfg);
    let once = start.elapsed().as_nanos().max(1) as u64;
    min_rep_ns.div_ceil(once).max(1)
}

fn time_rep(agg: Aggregator, cands: &PointSet, cfg: &EstimatorConfig, inner: u64) -> f64 {
    let start = Instant::now();
    for _ in 0..inner {
        agg.run(cands, cfg);
    }
    start.elapsed().as_nanos() as f64 / inner as f64
}

/// Repetitions cycle through the sizes so that drift in machine load hits
/// every size alike.
fn time_rows(agg: Aggregator, sets: &[PointSet], cfg: &EstimatorConfig, spec: &BenchSpec) -> Vec<BenchRow> {
    let inners: Vec<u64> = sets.iter().map(|c| inner_loops(agg, c, cfg, spec.min_rep_ns)).collect();
    let mut samples = vec![Vec::with_capacity(spec.reps); sets.len()];
    for _ in 0..spec.reps {
        for ((c, &inner), out) in sets.iter().zip(&inners).zip(&mut samples) {
            out.push(time_rep(agg, c, cfg, inner));
        }
    }
    sets.iter()
        .zip(inners)
        .zip(samples)
        .map(|((c, inner), mut per_call)| {
            per_call.sort_by(f64::total_cmp);
            BenchRow {
                aggregator: agg,
                m: c.len(),
                dim: c.dim(),
                inner,
                median_ns: per_call[(per_call.len() - 1) / 2],
                min_ns: per_call[0],
            }
        })
        .collect()
}

/// Times each aggregator on `m` synthetic candidates for every size and fits
/// the log-log slope of time against `m`.
pub fn run_scaling_bench(spec: &BenchSpec) -> Result<BenchReport> {
    if spec.sizes.len() < 2 || spec.sizes.windows(2).any(|w| w[0] >= w[1]) || spec.sizes[0] == 0 {
        return Err(Error::Config("sizes must hold at least two strictly ascending positive values".into()));
    }
    if spec.reps < 5 {
        return Err(Error::Config(format!("reps must be at least 5, got {}", spec.reps)));
    }
    if spec.dim == 0 {
        return Err(Error::Config("dim must be at least 1".into()));
    }
    let cfg = EstimatorConfig::practical(0.5, 0.1)?;
    let root = Stream::new(spec.seed);
    let sets: Vec<PointSet> =
        spec.sizes.iter().map(|&m| gaussian_candidates(m, spec.dim, root.substream(m as u64))).collect();

    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for &agg in &spec.aggregators {
        let agg_rows = time_rows(agg, &sets, &cfg, spec);
        let xs: Vec<f64> = agg_rows.iter().map(|r| r.m as f64).collect();
        let ys: Vec<f64> = agg_rows.iter().map(|r| r.median_ns.max(1.0)).collect();
        let (slope, intercept) = fit_slope(&xs, &ys);
        slopes.push(SlopeFit { aggregator: agg, slope, intercept });
        rows.extend(agg_rows);
    }
    Ok(BenchReport { spec: spec.clone(), rows, slopes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let xs = [256.0, 1024.0, 4096.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        let (s, c) = fit_slope(&xs, &ys);
        assert!((s - 1.5).abs() < 1e-12);
        assert!((c - 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn small_bench_runs() {
        let spec = BenchSpec { sizes: vec![8, 16], dim: 2, min_rep_ns: 10_000, ..BenchSpec::default() };
        let r = run_scaling_bench(&spec).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert!(r.slopes.iter().all(|s| s.slope.is_finite()));
        assert!(r.slope(Aggregator::Fastgd).is_some());
    }

    #[test]
    fn rejects_bad_specs() {
        let bad = [
            BenchSpec { sizes: vec![16, 8], ..BenchSpec::default() },
            BenchSpec { sizes: vec![16], ..BenchSpec::default() },
            BenchSpec { reps: 3, ..BenchSpec::default() },
            BenchSpec { dim: 0, ..BenchSpec::default() },
        ];
        for spec in bad {
            assert!(matches!(run_scaling_bench(&spec), Err(Error::Config(_))));
        }
    }
}
