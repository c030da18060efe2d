//! Instance generators. Every instance carries an exact [`CostOracle`].

use rand::Rng;
use rand_distr::{Distribution, Normal, Pareto};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{CostOracle, Point, PointSet};
use crate::rng::Stream;

fn one() -> f64 {
    1.0
}

/// Description of an instance; serialized with a `kind` tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    /// `n` points at 0 and `floor(eps n)` points at 1 on the line.
    TwoPointLb { n: usize, eps: f64 },
    /// Symmetric three-atom set on the line: spikes at `+-S sqrt(eps)`, each
    /// holding a `1 / (2 S^2 eps)` fraction of `total`, the rest at 0.
    EmpiricalMeanLb { total: usize, sample_size: usize, eps: f64 },
    Gaussian {
        n: usize,
        d: usize,
        #[serde(default = "one")]
        sigma: f64,
        #[serde(default)]
        seed: u64,
    },
    /// Two equal clusters at `+-offset * e_1` with Gaussian spread `sigma`.
    TwoCluster {
        n: usize,
        d: usize,
        offset: f64,
        #[serde(default)]
        sigma: f64,
        #[serde(default)]
        seed: u64,
    },
    /// Coordinates `sign * (X - 1)` with `X ~ Pareto(1, alpha)`.
    ParetoTail {
        n: usize,
        d: usize,
        alpha: f64,
        #[serde(default)]
        seed: u64,
    },
}

/// A generated ground set with its oracle.
#[derive(Debug, Clone)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub points: PointSet,
    pub oracle: CostOracle,
}

impl InstanceSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceSpec::TwoPointLb { .. } => "two_point_lb",
            InstanceSpec::EmpiricalMeanLb { .. } => "empirical_mean_lb",
            InstanceSpec::Gaussian { .. } => "gaussian",
            InstanceSpec::TwoCluster { .. } => "two_cluster",
            InstanceSpec::ParetoTail { .. } => "pareto_tail",
        }
    }

    pub fn generate(&self) -> Result<Instance> {
        let (points, oracle) = match *self {
            InstanceSpec::TwoPointLb { n, eps } => gen_two_point_lb(n, eps)?,
            InstanceSpec::EmpiricalMeanLb { total, sample_size, eps } => {
                gen_empirical_mean_lb(total, sample_size, eps)?
            }
            InstanceSpec::Gaussian { n, d, sigma, seed } => gen_gaussian(n, d, sigma, seed)?,
            InstanceSpec::TwoCluster { n, d, offset, sigma, seed } => {
                gen_two_cluster(n, d, offset, sigma, seed)?
            }
            InstanceSpec::ParetoTail { n, d, alpha, seed } => gen_pareto_tail(n, d, alpha, seed)?,
        };
        Ok(Instance { spec: self.clone(), points, oracle })
    }
}

fn check_shape(n: usize, d: usize) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::invalid(format!("need n >= 1 and d >= 1, got n = {n}, d = {d}")));
    }
    Ok(())
}

/// `n` points at 0 and `k = floor(eps n)` points at 1.
///
/// The oracle is exact from counts: with `N = n + k`, the mean is `k / N` and
/// `OPT = n k / N`. For integral `eps n` this is `eps / (1 + eps)` and
/// `eps n / (1 + eps)`; otherwise `eps` is effectively replaced by `k / n`.
pub fn gen_two_point_lb(n: usize, eps: f64) -> Result<(PointSet, CostOracle)> {
    if n == 0 || !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("need n >= 1 and eps > 0, got n = {n}, eps = {eps}")));
    }
    // Tolerate eps * n landing a hair below an integer.
    let k = (eps * n as f64 * (1.0 + 1e-12)).floor() as usize;
    if k == 0 {
        return Err(Error::invalid(format!("eps * n = {} < 1 leaves no point at 1", eps * n as f64)));
    }
    let total = n + k;
    let mut data = vec![0.0; n];
    data.resize(total, 1.0);
    let points = PointSet::from_flat_unchecked(1, data);
    let mean = k as f64 / total as f64;
    let opt = (n as f64 * k as f64) / total as f64;
    let oracle = CostOracle::from_parts(Point::from_vec_unchecked(vec![mean]), opt, total)?;
    Ok((points, oracle))
}

/// Spike size for [`gen_empirical_mean_lb`]: `total / (2 S^2 eps)` rounded to
/// nearest, at least 1.
pub fn spike_count(total: usize, sample_size: usize, eps: f64) -> usize {
    let s = sample_size as f64;
    ((total as f64 / (2.0 * s * s * eps)).round() as usize).max(1)
}

/// Three-atom set `{-S sqrt(eps), 0, +S sqrt(eps)}` on which the plain
/// empirical mean of `S` samples fails with probability about
/// `(1 / (S eps)) (1 - 1 / (S eps))`.
///
/// The spike counts are rounded (see [`spike_count`]), so the average cost
/// `OPT / total` is 1 only when `total / (2 S^2 eps)` is integral; the oracle
/// always records the realized value.
pub fn gen_empirical_mean_lb(
    total: usize,
    sample_size: usize,
    eps: f64,
) -> Result<(PointSet, CostOracle)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    let s = sample_size as f64;
    if sample_size == 0 || s * s * eps <= 1.0 {
        return Err(Error::invalid(format!(
            "need sample_size^2 * eps > 1, got {}",
            s * s * eps
        )));
    }
    let spike = spike_count(total, sample_size, eps);
    if 2 * spike > total {
        return Err(Error::invalid(format!(
            "total = {total} cannot hold two spikes of {spike} points; increase total"
        )));
    }
    let pos = s * eps.sqrt();
    let mut data = Vec::with_capacity(total);
    data.extend(std::iter::repeat_n(-pos, spike));
    data.resize(total - spike, 0.0);
    data.extend(std::iter::repeat_n(pos, spike));
    let points = PointSet::from_flat_unchecked(1, data);
    let opt = 2.0 * spike as f64 * pos * pos;
    let oracle = CostOracle::from_parts(Point::zeros(1), opt, total)?;
    Ok((points, oracle))
}

pub fn gen_gaussian(n: usize, d: usize, sigma: f64, seed: u64) -> Result<(PointSet, CostOracle)> {
    check_shape(n, d)?;
    let normal = Normal::new(0.0, sigma)
        .map_err(|_| Error::invalid(format!("sigma must be finite and >= 0, got {sigma}")))?;
    let mut rng = Stream::new(seed).rng();
    let data = (0..n * d).map(|_| normal.sample(&mut rng)).collect();
    finish(d, data)
}

/// First `floor(n/2)` points around `+offset e_1`, the rest around `-offset e_1`.
pub fn gen_two_cluster(
    n: usize,
    d: usize,
    offset: f64,
    sigma: f64,
    seed: u64,
) -> Result<(PointSet, CostOracle)> {
    check_shape(n, d)?;
    if !offset.is_finite() {
        return Err(Error::invalid("offset must be finite"));
    }
    let normal = Normal::new(0.0, sigma)
        .map_err(|_| Error::invalid(format!("sigma must be finite and >= 0, got {sigma}")))?;
    let mut rng = Stream::new(seed).rng();
    let mut data = Vec::with_capacity(n * d);
    for i in 0..n {
        let center = if i < n / 2 { offset } else { -offset };
        for axis in 0..d {
            let base = if axis == 0 { center } else { 0.0 };
            let noise = if sigma > 0.0 { normal.sample(&mut rng) } else { 0.0 };
            data.push(base + noise);
        }
    }
    finish(d, data)
}

pub fn gen_pareto_tail(n: usize, d: usize, alpha: f64, seed: u64) -> Result<(PointSet, CostOracle)> {
    check_shape(n, d)?;
    let pareto = Pareto::new(1.0, alpha)
        .map_err(|_| Error::invalid(format!("alpha must be positive, got {alpha}")))?;
    let mut rng = Stream::new(seed).rng();
    let data = (0..n * d)
        .map(|_| {
            let x: f64 = pareto.sample(&mut rng) - 1.0;
            if rng.random::<bool>() {
                x
            } else {
                -x
            }
        })
        .collect();
    finish(d, data)
}

fn finish(d: usize, data: Vec<f64>) -> Result<(PointSet, CostOracle)> {
    let points = PointSet::from_flat(d, data)?;
    let oracle = CostOracle::exact(&points);
    Ok((points, oracle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::{cost, decomposition_check, mean};

    fn assert_oracle_exact(points: &PointSet, oracle: &CostOracle, tol: f64) {
        let mu = mean(points);
        for (a, b) in mu.coords().iter().zip(oracle.mean.coords()) {
            assert!((a - b).abs() <= tol * (1.0 + b.abs()), "mean {a} vs {b}");
        }
        let c = cost(points, oracle.mean.coords()).unwrap();
        assert!((c - oracle.opt).abs() <= tol * oracle.opt.max(1.0), "opt {c} vs {}", oracle.opt);
        let (lhs, rhs) = decomposition_check(points, oracle.mean.coords()).unwrap();
        assert!((lhs - rhs).abs() <= 1e-9 * lhs.max(1.0));
    }

    #[test]
    fn two_point_examples() {
        let (p, o) = gen_two_point_lb(100, 0.5).unwrap();
        assert_eq!(p.len(), 150);
        assert!((o.mean.coords()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((o.opt - 100.0 / 3.0).abs() < 1e-12);

        let (p, o) = gen_two_point_lb(1, 1.0).unwrap();
        assert_eq!(p.as_flat(), &[0.0, 1.0]);
        assert_eq!((o.mean.coords()[0], o.opt), (0.5, 0.5));

        let (p, o) = gen_two_point_lb(1000, 0.1).unwrap();
        assert_eq!(p.len(), 1100);
        assert_oracle_exact(&p, &o, 1e-12);

        assert!(gen_two_point_lb(10, 0.05).is_err());
        assert!(gen_two_point_lb(0, 0.5).is_err());
    }

    #[test]
    fn zero_output_costs_exactly_one_plus_eps() {
        for (n, eps) in [(100, 0.5), (1000, 0.1), (7, 0.3)] {
            let (p, o) = gen_two_point_lb(n, eps).unwrap();
            let k = p.as_flat().iter().filter(|&&x| x == 1.0).count();
            let eps_eff = k as f64 / n as f64;
            let ratio = cost(&p, &[0.0]).unwrap() / o.opt;
            assert!((ratio - (1.0 + eps_eff)).abs() < 1e-12);
        }
    }

    #[test]
    fn empirical_lb_examples() {
        let (p, o) = gen_empirical_mean_lb(8000, 40, 0.05).unwrap();
        let pos = 40.0 * 0.05f64.sqrt();
        assert!((pos - 8.944).abs() < 1e-3);
        let spikes_pos = p.as_flat().iter().filter(|&&x| x == pos).count();
        let spikes_neg = p.as_flat().iter().filter(|&&x| x == -pos).count();
        assert_eq!((spikes_pos, spikes_neg), (50, 50));
        assert_eq!(mean(&p).coords(), &[0.0]);
        assert!((o.opt / o.n as f64 - 1.0).abs() < 1e-12);

        let (p, o) = gen_empirical_mean_lb(160_000, 40, 0.05).unwrap();
        assert_eq!(spike_count(160_000, 40, 0.05), 1000);
        assert_eq!(mean(&p).coords(), &[0.0]);
        assert!((o.opt / o.n as f64 - 1.0).abs() < 0.01);
        assert_oracle_exact(&p, &o, 1e-9);
    }

    #[test]
    fn empirical_lb_rounding_is_recorded() {
        // 10_000 / 160 = 62.5 rounds to 63 per spike.
        let (p, o) = gen_empirical_mean_lb(10_000, 40, 0.05).unwrap();
        assert_eq!(spike_count(10_000, 40, 0.05), 63);
        assert_oracle_exact(&p, &o, 1e-9);
        assert!((o.opt / o.n as f64 - 1.0).abs() < 0.01);
    }

    #[test]
    fn empirical_lb_rejects_infeasible() {
        assert!(gen_empirical_mean_lb(1, 40, 0.05).is_err());
        assert!(gen_empirical_mean_lb(1000, 4, 0.05).is_err());
        assert!(gen_empirical_mean_lb(1000, 40, 1.5).is_err());
    }

    #[test]
    fn random_generators_have_exact_oracles() {
        let specs = [
            InstanceSpec::Gaussian { n: 500, d: 7, sigma: 2.0, seed: 1 },
            InstanceSpec::TwoCluster { n: 400, d: 3, offset: 5.0, sigma: 0.5, seed: 2 },
            InstanceSpec::ParetoTail { n: 300, d: 4, alpha: 2.5, seed: 3 },
            InstanceSpec::TwoPointLb { n: 1000, eps: 0.1 },
            InstanceSpec::EmpiricalMeanLb { total: 16_000, sample_size: 40, eps: 0.05 },
        ];
        for spec in specs {
            let inst = spec.generate().unwrap();
            assert_oracle_exact(&inst.points, &inst.oracle, 1e-9);
        }
    }

    #[test]
    fn small_and_symmetric_cases() {
        let (_, o) = gen_gaussian(1, 1, 1.0, 5).unwrap();
        assert_eq!(o.opt, 0.0);
        let (p, o) = gen_two_cluster(10, 2, 3.0, 0.0, 0).unwrap();
        assert_eq!(o.mean.coords(), &[0.0, 0.0]);
        assert_eq!(p.row(0), &[3.0, 0.0]);
        assert_eq!(p.row(9), &[-3.0, 0.0]);
        assert!(gen_gaussian(0, 1, 1.0, 0).is_err());
        assert!(gen_pareto_tail(10, 1, -1.0, 0).is_err());
    }

    #[test]
    fn spec_serde() {
        let spec: InstanceSpec =
            serde_json::from_str(r#"{"kind":"gaussian","n":10,"d":2}"#).unwrap();
        assert_eq!(spec, InstanceSpec::Gaussian { n: 10, d: 2, sigma: 1.0, seed: 0 });
        assert_eq!(spec.kind(), "gaussian");
        assert!(serde_json::from_str::<InstanceSpec>(r#"{"kind":"nope"}"#).is_err());
        assert!(serde_json::from_str::<InstanceSpec>(r#"{"kind":"two_point_lb","n":1,"eps":1,"x":2}"#)
            .is_err());
    }
}
