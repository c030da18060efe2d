use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use meanest::harness::{
    resolve_config, run_estimator, run_experiment, run_scaling_bench, BenchSpec, ExperimentConfig,
    Method, Overrides,
};
use meanest::instances::InstanceSpec;
use meanest::io::{read_points, write_points, Format};
use meanest::{CostOracle, Error, Preset, Result, Stream};

#[derive(Parser)]
#[command(name = "meanest", version, about = "Euclidean mean estimation from few uniform samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the mean of a point file.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value = "fastgd")]
        method: Method,
        #[arg(long, default_value = "practical")]
        preset: Preset,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample size of the empirical estimator.
        #[arg(long)]
        sample_size: Option<usize>,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run a Monte Carlo experiment described by a JSON file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Directory receiving trials.csv and report.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Time the aggregators over a range of candidate counts.
    Bench {
        /// Comma-separated candidate counts.
        #[arg(long, value_delimiter = ',', default_value = "256,1024,4096")]
        sizes: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate an instance and write its points.
    Gen {
        /// two_point_lb, empirical_mean_lb, gaussian, two_cluster or pareto_tail.
        #[arg(long)]
        kind: String,
        /// Comma-separated key=value pairs, e.g. "n=1000,eps=0.5".
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Output format; inferred from the extension (.bin is binary) when omitted.
        #[arg(long)]
        format: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Estimate { input, eps, delta, method, preset, depth, seed, sample_size, json } => {
            estimate(&input, eps, delta, method, preset, depth, seed, sample_size, json)
        }
        Command::Experiment { config, out } => experiment(&config, &out),
        Command::Bench { sizes, out, dim, reps, seed } => bench(sizes, &out, dim, reps, seed),
        Command::Gen { kind, params, out, seed, format } => gen(&kind, &params, &out, seed, format),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))
}

fn write_file(path: &Path, contents: String) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })
}

#[allow(clippy::too_many_arguments)]
fn estimate(
    input: &Path,
    eps: f64,
    delta: f64,
    method: Method,
    preset: Preset,
    depth: usize,
    seed: u64,
    sample_size: Option<usize>,
    json: bool,
) -> Result<()> {
    let points = read_points(input)?;
    let cfg = resolve_config(method, preset, eps, delta, depth, seed, &Overrides::default())
        .map_err(|e| Error::Config(e.to_string()))?;
    let report = run_estimator(method, &points, &cfg, Stream::new(seed), sample_size, false)?;
    let ratio = CostOracle::exact(&points).approx_ratio(report.estimate.coords());
    if json {
        let mut value = serde_json::to_value(&report).map_err(|e| Error::Format(e.to_string()))?;
        if let Some(trace) = value.get_mut("fastgd").and_then(Value::as_object_mut) {
            trace.remove("iterates");
        }
        value["approx_ratio"] = serde_json::json!(ratio);
        println!("{}", to_json(&value)?);
    } else {
        let coords: Vec<String> = report.estimate.coords().iter().map(|x| x.to_string()).collect();
        println!("{}", coords.join(" "));
        eprintln!(
            "method={} samples={} m={} s={} approx_ratio={ratio:.6} t_sample_ns={} t_agg_ns={}",
            report.method, report.samples, report.m, report.batch_size, report.t_sample_ns, report.t_agg_ns
        );
    }
    Ok(())
}

fn experiment(config: &Path, out: &Path) -> Result<()> {
    let text = fs::read_to_string(config).map_err(|e| Error::Io { path: config.to_path_buf(), source: e })?;
    let cfg = ExperimentConfig::from_json(&text)?;
    let output = run_experiment(&cfg)?;
    output.write(out)?;
    println!("{:<10} {:>8} {:>12} {:>12} {:>12}", "estimator", "samples", "success", "ratio_p50", "ratio_p90");
    for s in &output.report.estimators {
        println!(
            "{:<10} {:>8} {:>12.4} {:>12.6} {:>12.6}",
            s.estimator.name(),
            s.samples,
            s.success_rate,
            s.ratio_p50,
            s.ratio_p90
        );
    }
    Ok(())
}

fn bench(sizes: Vec<usize>, out: &Path, dim: usize, reps: usize, seed: u64) -> Result<()> {
    let spec = BenchSpec { sizes, dim, reps, seed, ..BenchSpec::default() };
    let report = run_scaling_bench(&spec)?;
    for row in &report.rows {
        println!("{:<16} m={:<6} median_ns={:.0}", row.aggregator.name(), row.m, row.median_ns);
    }
    for s in &report.slopes {
        println!("{:<16} slope={:.3}", s.aggregator.name(), s.slope);
    }
    write_file(out, to_json(&report)? + "\n")
}

/// Parses `k=v,k=v` into a JSON object; values are read as JSON when they
/// parse as such and as strings otherwise.
fn parse_params(params: &str) -> Result<Map<String, Value>> {
    let mut map = Map::new();
    for pair in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("parameter {pair:?} is not key=value")))?;
        let value = serde_json::from_str(v.trim()).unwrap_or_else(|_| Value::String(v.trim().into()));
        map.insert(k.trim().to_string(), value);
    }
    Ok(map)
}

fn gen(kind: &str, params: &str, out: &Path, seed: Option<u64>, format: Option<String>) -> Result<()> {
    let mut map = parse_params(params)?;
    map.insert("kind".into(), Value::String(kind.into()));
    if let Some(seed) = seed {
        map.insert("seed".into(), seed.into());
    }
    let spec: InstanceSpec =
        serde_json::from_value(Value::Object(map)).map_err(|e| Error::Config(e.to_string()))?;
    let instance = spec.generate().map_err(|e| Error::Config(e.to_string()))?;
    let format = match format.as_deref() {
        None => Format::from_path(out),
        Some("text") => Format::Text,
        Some("binary") => Format::Binary,
        Some(other) => return Err(Error::Config(format!("unknown format {other:?}"))),
    };
    write_points(out, &instance.points, format)?;
    eprintln!(
        "wrote {} points of dimension {} (OPT/n = {})",
        instance.points.len(),
        instance.points.dim(),
        instance.oracle.opt / instance.oracle.n as f64
    );
    Ok(())
}
