//! Batched uniform sampling: `m` batches of `s` indices drawn with
//! replacement, each reduced to its empirical mean.

use rand::Rng;

use crate::config::EstimatorConfig;
use crate::error::{Error, Result};
use crate::point::{mean_of_flat, Point, PointSet};
use crate::rng::Stream;

/// The empirical means of the sampled batches.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateMeans {
    pub means: PointSet,
    pub batch_size: usize,
}

impl CandidateMeans {
    pub fn m(&self) -> usize {
        self.means.len()
    }

    pub fn total_samples(&self) -> usize {
        self.m() * self.batch_size
    }
}

/// Mean of `size` rows drawn uniformly with replacement, reusing `buf`.
fn batch_mean(points: &PointSet, size: usize, stream: Stream, buf: &mut Vec<f64>) -> Vec<f64> {
    let n = points.len();
    let mut rng = stream.rng();
    buf.clear();
    for _ in 0..size {
        buf.extend_from_slice(points.row(rng.random_range(0..n)));
    }
    mean_of_flat(buf, points.dim())
}

/// Draws `m = ceil(b ln(1/delta))` batches of `s = ceil(a/eps)` uniform
/// samples and returns their means. Batch `i` uses `stream.substream(i)`, so
/// the result does not depend on how batches are scheduled.
///
/// When `m * s` exceeds `n` this still samples with replacement.
pub fn draw_candidate_means(
    points: &PointSet,
    cfg: &EstimatorConfig,
    stream: Stream,
) -> CandidateMeans {
    let m = cfg.batch_count();
    let s = cfg.batch_size();
    let dim = points.dim();

    let run = |range: std::ops::Range<usize>| -> Vec<f64> {
        let mut buf = Vec::with_capacity(s * dim);
        let mut out = Vec::with_capacity(range.len() * dim);
        for i in range {
            out.extend(batch_mean(points, s, stream.substream(i as u64), &mut buf));
        }
        out
    };

    #[cfg(feature = "parallel")]
    let data = {
        use rayon::prelude::*;
        // Enough work per task to amortize scheduling; results are concatenated in batch order.
        let chunk = (4096 / (s * dim).max(1)).clamp(1, m);
        let starts: Vec<usize> = (0..m).step_by(chunk).collect();
        let parts: Vec<Vec<f64>> =
            starts.into_par_iter().map(|lo| run(lo..(lo + chunk).min(m))).collect();
        parts.concat()
    };
    #[cfg(not(feature = "parallel"))]
    let data = run(0..m);

    CandidateMeans { means: PointSet::from_flat_unchecked(dim, data), batch_size: s }
}

/// Plain subsample mean of `sample_size` uniform draws with replacement.
pub fn empirical_mean_estimate(
    points: &PointSet,
    sample_size: usize,
    stream: Stream,
) -> Result<Point> {
    if sample_size == 0 {
        return Err(Error::invalid("sample_size must be at least 1"));
    }
    let mut buf = Vec::new();
    Ok(Point::from_vec_unchecked(batch_mean(points, sample_size, stream, &mut buf)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::{sq_dist, CostOracle};

    #[test]
    fn singleton_set_gives_its_point() {
        let p = PointSet::from_rows(&[[2.0, -1.0]]).unwrap();
        let cfg = EstimatorConfig::practical(0.5, 0.1).unwrap();
        let c = draw_candidate_means(&p, &cfg, Stream::new(1));
        assert_eq!(c.m(), 24);
        assert_eq!(c.batch_size, 80);
        assert!(c.means.rows().all(|r| r == [2.0, -1.0]));
        assert_eq!(empirical_mean_estimate(&p, 5, Stream::new(3)).unwrap().coords(), &[2.0, -1.0]);
    }

    #[test]
    fn batch_count_with_unit_log() {
        let p = PointSet::from_scalars(&[0.0, 1.0]).unwrap();
        let cfg = EstimatorConfig::new(1.0, (-1.0f64).exp(), 3.0, 10.0).unwrap();
        let c = draw_candidate_means(&p, &cfg, Stream::new(1));
        assert_eq!(c.m(), 10);
        assert_eq!(c.total_samples(), 30);
    }

    #[test]
    fn deterministic_given_seed() {
        let data: Vec<f64> = (0..300).map(|i| (i as f64 * 0.37).sin()).collect();
        let p = PointSet::from_flat(3, data).unwrap();
        let cfg = EstimatorConfig::practical(0.2, 0.01).unwrap();
        let a = draw_candidate_means(&p, &cfg, Stream::new(5));
        let b = draw_candidate_means(&p, &cfg, Stream::new(5));
        assert_eq!(a, b);
        let c = draw_candidate_means(&p, &cfg, Stream::new(6));
        assert_ne!(a, c);
    }

    #[test]
    fn batches_are_exact_means_of_their_draws() {
        // Re-draw batch 2 by hand from its substream and average it.
        let p = PointSet::from_scalars(&[0.0, 1.0, 5.0, 9.0]).unwrap();
        let cfg = EstimatorConfig::new(1.0, 0.5, 6.0, 4.0).unwrap();
        let stream = Stream::new(77);
        let c = draw_candidate_means(&p, &cfg, stream);
        let mut rng = stream.substream(2).rng();
        let draws: Vec<f64> = (0..6).map(|_| p.row(rng.random_range(0..4))[0]).collect();
        let expect = draws.iter().sum::<f64>() / 6.0;
        assert!((c.means.row(2)[0] - expect).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_uniform() {
        let p = PointSet::from_scalars(&(0..10).map(f64::from).collect::<Vec<_>>()).unwrap();
        let mut rng = Stream::new(2024).rng();
        let mut counts = [0usize; 10];
        let draws = 1_000_000;
        for _ in 0..draws {
            counts[rng.random_range(0..p.len())] += 1;
        }
        for c in counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - 0.1).abs() < 0.001, "frequency {freq}");
        }
    }

    #[test]
    fn empirical_mean_law_of_large_numbers() {
        let p = PointSet::from_scalars(&[1.0, 3.0]).unwrap();
        let est = empirical_mean_estimate(&p, 2 * 1000, Stream::new(8)).unwrap();
        assert!((est.coords()[0] - 2.0).abs() < 0.05 * 2.0);
        assert!(empirical_mean_estimate(&p, 0, Stream::new(8)).is_err());
    }

    #[test]
    fn squared_error_matches_variance_over_batch_size() {
        // E|mu_hat - mu|^2 = OPT / (n s) for sampling with replacement.
        let mut v = vec![0.0; 100];
        v.extend(std::iter::repeat_n(1.0, 50));
        let p = PointSet::from_scalars(&v).unwrap();
        let oracle = CostOracle::exact(&p);
        let cfg = EstimatorConfig {
            b: 100_000.0 / 10f64.ln(),
            ..EstimatorConfig::new(0.5, 0.1, 40.0, 1.0).unwrap()
        };
        let c = draw_candidate_means(&p, &cfg, Stream::new(99));
        assert_eq!(c.m(), 100_000);
        let s = c.batch_size as f64;
        let avg = c.means.rows().map(|r| sq_dist(r, oracle.mean.coords())).sum::<f64>() / c.m() as f64;
        let expect = oracle.opt / (oracle.n as f64 * s);
        assert!((avg / expect - 1.0).abs() < 0.05, "avg {avg} expect {expect}");
    }
}
