//! Euclidean mean estimation from few uniform samples.
//!
//! Candidate means are drawn by batched sampling ([`sampling`]) and aggregated
//! by FastGD ([`gd`]) or MinSumSelect ([`minsum`]); [`baselines`] holds the
//! reference estimators, [`instances`] the generators with exact oracles, and
//! [`harness`] the Monte Carlo engine behind the `meanest` binary.
//!
//! ```
//! use meanest::harness::{run_estimator, Method};
//! use meanest::instances::InstanceSpec;
//! use meanest::{is_eps_approx, EstimatorConfig, Stream};
//!
//! # fn main() -> meanest::Result<()> {
//! let inst = InstanceSpec::Gaussian { n: 10_000, d: 8, sigma: 1.0, seed: 1 }.generate()?;
//! let cfg = EstimatorConfig::practical(0.5, 0.1)?;
//! let report = run_estimator(Method::Fastgd, &inst.points, &cfg, Stream::new(7), None, false)?;
//! assert!(is_eps_approx(&inst.oracle, report.estimate.coords(), 0.5));
//! # Ok(())
//! # }
//! ```

pub mod baselines;
pub mod config;
pub mod error;
pub mod gd;
pub mod harness;
pub mod instances;
pub mod io;
pub mod minsum;
pub mod point;
pub mod rng;
pub mod sampling;
pub mod select;
pub mod sum;

pub use config::{EstimatorConfig, Preset};
pub use error::{Error, Result};
pub use point::{cost, is_eps_approx, mean, CostOracle, Point, PointSet};
pub use rng::Stream;
