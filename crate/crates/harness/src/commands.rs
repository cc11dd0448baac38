//! Subcommand dispatch. Each command reads typed parameters from the run
//! config, computes flat records and encodes them in the requested format.

use crate::acceptance;
use crate::config::{parse_grid, parse_list, parse_sites, RunConfig};
use crate::error::CliError;
use crate::records::*;
use crate::stats::mean_stderr;
use ipkit_core::fredholm::{fredholm_det_converged, painleve2_f2, tw2_cdf, QuadratureRule};
use ipkit_core::kernels::{airy_kernel, airy_kernel_closed_matrix, sine_kernel, site_value, SeriesKernel};
use ipkit_core::macdonald::{oy_polymer_mc, q_moment, QTParams};
use ipkit_core::samplers::{
    ballistic_deposition, growth_exponent, log_gamma_weights, lpp_time, polymer_log_partition, qtasep_run,
    random_permutation, rsk_shape, sample_plancherel, smallest_row, PlanePartitionSampler,
};
use ipkit_core::symcore::Partition;
use ipkit_core::RngStream;
use rand_distr::{Distribution, Exp1, Geometric};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer};
use serde_json::Value;
use std::io::Write;

pub const COMMANDS: [&str; 9] = ["sample", "kernel", "fredholm", "moments", "lpp", "polymer", "qtasep", "bd", "accept"];

/// Encoded artifact plus whether the command itself reported a failure
/// (only `accept` does).
pub struct Output {
    pub bytes: Vec<u8>,
    pub failed: bool,
}

impl Output {
    fn ok(bytes: Vec<u8>) -> Self {
        Output { bytes, failed: false }
    }
}

/// Text parameters may arrive from flags as numbers (`--sites 3`).
fn text<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    Ok(match Option::<Value>::deserialize(d)? {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s),
        Some(v) => Some(v.to_string()),
    })
}

fn positive(name: &str, v: Option<f64>) -> Result<f64, CliError> {
    match v {
        Some(x) if x.is_finite() && x > 0.0 => Ok(x),
        Some(x) => Err(CliError::Validation(format!("--{name} must be positive, got {x}"))),
        None => Err(CliError::Validation(format!("--{name} is required"))),
    }
}

fn count(name: &str, v: Option<usize>) -> Result<usize, CliError> {
    match v {
        Some(0) => Err(CliError::Validation(format!("--{name} must be at least 1"))),
        Some(n) => Ok(n),
        None => Err(CliError::Validation(format!("--{name} is required"))),
    }
}

/// Runs `f` on replica streams `root.split(i)` in parallel; output order is
/// replica order regardless of scheduling.
pub fn replicas<T, F>(root: &RngStream, n: usize, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(usize, &mut RngStream) -> ipkit_core::Result<T> + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| f(i, &mut root.split(i as u64)))
        .collect::<ipkit_core::Result<Vec<T>>>()
        .map_err(CliError::from)
}

fn shape_text(p: &Partition) -> String {
    p.rows().iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn execute(cfg: &RunConfig, log: &mut dyn Write) -> Result<Output, CliError> {
    match cfg.command.as_str() {
        "sample" => sample(cfg),
        "kernel" => kernel(cfg),
        "fredholm" => fredholm(cfg),
        "moments" => moments(cfg),
        "lpp" => lpp(cfg),
        "polymer" => polymer(cfg),
        "qtasep" => qtasep(cfg),
        "bd" => bd(cfg),
        "accept" => accept(cfg, log),
        other => Err(CliError::Validation(format!("unknown command `{other}`"))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleParams {
    #[serde(default, deserialize_with = "text")]
    model: Option<String>,
    theta: Option<f64>,
    n: Option<usize>,
    a: Option<usize>,
    b: Option<usize>,
    q: Option<f64>,
    size: Option<usize>,
    cutoff: Option<u32>,
}

fn sample(cfg: &RunConfig) -> Result<Output, CliError> {
    let p: SampleParams = cfg.typed()?;
    let seed = cfg.require_seed()?;
    let n = count("n", p.n.or(cfg.replicas).or(Some(1)))?;
    let records: Vec<SampleRecord> = match p.model.as_deref().unwrap_or("plancherel") {
        "plancherel" => {
            let theta = positive("theta", p.theta)?;
            replicas(&RngStream::new(seed), n, |i, rng| {
                let l = sample_plancherel(theta, rng)?;
                Ok(SampleRecord { sample: i, size: l.size() as u64, shape: shape_text(&l) })
            })?
        }
        "permutation" => {
            let size = count("size", p.size)?;
            replicas(&RngStream::new(seed), n, |i, rng| {
                let l = rsk_shape(&random_permutation(size, rng));
                Ok(SampleRecord { sample: i, size: l.size() as u64, shape: shape_text(&l) })
            })?
        }
        "plane" => {
            let (a, b) = (count("a", p.a)?, count("b", p.b)?);
            let q = p.q.ok_or_else(|| CliError::Validation("--q is required".into()))?;
            let sampler = PlanePartitionSampler::new(a, b, Partition::empty(), q, p.cutoff.unwrap_or(60))?;
            let root = RngStream::new(seed);
            (0..n)
                .into_par_iter()
                .map_init(
                    || sampler.clone(),
                    |s, i| {
                        let (pp, _) = s.sample(&mut root.split(i as u64))?;
                        let shape = pp
                            .filling
                            .iter()
                            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
                            .collect::<Vec<_>>()
                            .join(";");
                        Ok(SampleRecord { sample: i, size: pp.volume(), shape })
                    },
                )
                .collect::<ipkit_core::Result<Vec<_>>>()?
        }
        other => return Err(CliError::Validation(format!("unknown sample model `{other}`"))),
    };
    Ok(Output::ok(emit(&records, cfg.format)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelParams {
    #[serde(default, deserialize_with = "text")]
    kernel: Option<String>,
    theta: Option<f64>,
    phi: Option<f64>,
    #[serde(default, deserialize_with = "text")]
    sites: Option<String>,
    #[serde(default, deserialize_with = "text")]
    points: Option<String>,
}

fn kernel(cfg: &RunConfig) -> Result<Output, CliError> {
    let p: KernelParams = cfg.typed()?;
    let mut records = Vec::new();
    match p.kernel.as_deref().unwrap_or("plancherel") {
        "plancherel" => {
            let theta = positive("theta", p.theta)?;
            let sites = parse_sites(p.sites.as_deref().unwrap_or("-5:5"))?;
            let w = SeriesKernel::plancherel(theta)?.window(&sites);
            for (i, &a) in sites.iter().enumerate() {
                for (j, &b) in sites.iter().enumerate() {
                    records.push(KernelRecord { x: site_value(a), y: site_value(b), k: w.values[i][j] });
                }
            }
        }
        "sine" => {
            let phi = p.phi.unwrap_or(std::f64::consts::FRAC_PI_2);
            if !(phi > 0.0 && phi < std::f64::consts::PI) {
                return Err(CliError::Validation(format!("--phi must lie in (0, π), got {phi}")));
            }
            let sites = parse_sites(p.sites.as_deref().unwrap_or("-5:5"))?;
            for &a in &sites {
                for &b in &sites {
                    records.push(KernelRecord { x: a as f64, y: b as f64, k: sine_kernel(phi, a, b) });
                }
            }
        }
        "airy" => {
            let pts = parse_grid(p.points.as_deref().unwrap_or("-2:2:0.5"))?;
            for &x in &pts {
                for &y in &pts {
                    records.push(KernelRecord { x, y, k: airy_kernel(x, y)? });
                }
            }
        }
        other => return Err(CliError::Validation(format!("unknown kernel `{other}`"))),
    }
    Ok(Output::ok(emit(&records, cfg.format)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FredholmParams {
    #[serde(default, deserialize_with = "text")]
    kernel: Option<String>,
    #[serde(rename = "s-grid", default, deserialize_with = "text")]
    s_grid: Option<String>,
    #[serde(default, deserialize_with = "text")]
    method: Option<String>,
}

fn fredholm(cfg: &RunConfig) -> Result<Output, CliError> {
    let p: FredholmParams = cfg.typed()?;
    if p.kernel.as_deref().unwrap_or("airy") != "airy" {
        return Err(CliError::Validation("only --kernel airy has a Fredholm determinant on (s, ∞)".into()));
    }
    let grid = parse_grid(p.s_grid.as_deref().unwrap_or("-5:2:0.5"))?;
    let method = p.method.as_deref().unwrap_or("nystrom");
    let det_tol = cfg.tolerances.get("det").copied();
    let records = grid
        .par_iter()
        .map(|&s| {
            let value = match (method, det_tol) {
                ("nystrom", None) => tw2_cdf(s)?,
                ("nystrom", Some(tol)) => {
                    let rule = QuadratureRule::new(40)?;
                    fredholm_det_converged(&airy_kernel_closed_matrix, s, &rule, tol, 640)?.value.clamp(0.0, 1.0)
                }
                ("painleve", _) => painleve2_f2(s)?,
                (other, _) => return Err(CliError::Validation(format!("unknown method `{other}`"))),
            };
            Ok(CdfRecord { s, value })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Output::ok(emit(&records, cfg.format)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MomentParams {
    k: Option<usize>,
    #[serde(rename = "N")]
    n: Option<usize>,
    q: Option<f64>,
    tau: Option<f64>,
}

fn moments(cfg: &RunConfig) -> Result<Output, CliError> {
    let p: MomentParams = cfg.typed()?;
    let k = count("k", p.k.or(Some(1)))?;
    let n = count("N", p.n)?;
    let q = p.q.ok_or_else(|| CliError::Validation("--q is required".into()))?;
    let tau = positive("tau", p.tau)?;
    let moment = q_moment(k, n, &QTParams::whittaker(q)?, tau)?;
    Ok(Output::ok(emit(&[MomentRecord { k, n, q, tau, moment }], cfg.format)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LppParams {
    rows: Option<usize>,
    cols: Option<usize>,
    #[serde(default, deserialize_with = "text")]
    weights: Option<String>,
    p: Option<f64>,
}

fn lpp(cfg: &RunConfig) -> Result<Output, CliError> {
    let p: LppParams = cfg.typed()?;
    let seed = cfg.require_seed()?;
    let (rows, cols) = (count("rows", p.rows)?, count("cols", p.cols)?);
    let n = count("replicas", cfg.replicas.or(Some(1)))?;
    let geometric = match p.weights.as_deref().unwrap_or("exponential") {
        "exponential" => None,
        "geometric" => {
            let prob = p.p.unwrap_or(0.5);
            Some(Geometric::new(prob).map_err(|e| CliError::Validation(format!("--p {prob}: {e}")))?)
        }
        other => return Err(CliError::Validation(format!("unknown weights `{other}`"))),
    };
    let records = replicas(&RngStream::new(seed), n, |i, rng| {
        let w: Vec<Vec<f64>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| match &geometric {
                        Some(g) => g.sample(rng) as f64,
                        None => Exp1.sample(rng),
                    })
                    .collect()
            })
            .collect();
        Ok(ReplicaRecord { replica: i, value: lpp_time(&w, rows, cols)? })
    })?;
    Ok(Output::ok(emit(&records, cfg.format)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolymerParams {
    #[serde(default, deserialize_with = "text")]
    model: Option<String>,
    rows: Option<usize>,
    cols: Option<usize>,
    theta: Option<f64>,
    #[serde(rename = "N")]
    n: Option<usize>,
    t: Option<f64>,
    paths: Option<usize>,
}

fn polymer(cfg: &RunConfig) -> Result<Output, CliError> {
    let p: PolymerParams = cfg.typed()?;
    let seed = cfg.require_seed()?;
    match p.model.as_deref().unwrap_or("loggamma") {
        "loggamma" => {
            let (rows, cols) = (count("rows", p.rows)?, count("cols", p.cols)?);
            let theta = positive("theta", p.theta)?;
            let n = count("replicas", cfg.replicas.or(Some(1)))?;
            let records = replicas(&RngStream::new(seed), n, |i, rng| {
                let d = log_gamma_weights(rows, cols, theta, rng)?;
                Ok(ReplicaRecord { replica: i, value: polymer_log_partition(&d, rows, cols)? })
            })?;
            Ok(Output::ok(emit(&records, cfg.format)?))
        }
        "oy" => {
            let n = count("N", p.n)?;
            let t = positive("t", p.t)?;
            let paths = count("paths", p.paths.or(cfg.replicas).or(Some(10_000)))?;
            let est = oy_polymer_mc(n, t, paths, &RngStream::new(seed))?;
            let factorial: f64 = (1..n).map(|i| i as f64).product();
            let rec = EstimateRecord {
                quantity: "E Z".into(),
                mean: est.mean,
                stderr: est.stderr,
                replicas: est.paths,
                reference: Some((t / 2.0).exp() * t.powi(n as i32 - 1) / factorial),
            };
            Ok(Output::ok(emit(&[rec], cfg.format)?))
        }
        other => Err(CliError::Validation(format!("unknown polymer model `{other}`"))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QtasepParams {
    #[serde(rename = "N")]
    n: Option<usize>,
    q: Option<f64>,
    tau: Option<f64>,
}

/// Mean of q^{λ_N} over independent q-TASEP runs.
pub fn qtasep_estimate(n: usize, q: f64, tau: f64, runs: usize, seed: u64) -> Result<(f64, f64), CliError> {
    let vals = replicas(&RngStream::new(seed), runs, |_, rng| {
        let tr = qtasep_run(n, q, tau, rng)?;
        Ok(q.powi(smallest_row(&tr.last) as i32))
    })?;
    Ok(mean_stderr(&vals))
}

fn qtasep(cfg: &RunConfig) -> Result<Output, CliError> {
    let p: QtasepParams = cfg.typed()?;
    let seed = cfg.require_seed()?;
    let n = count("N", p.n)?;
    let q = p.q.ok_or_else(|| CliError::Validation("--q is required".into()))?;
    let tau = positive("tau", p.tau)?;
    let runs = count("replicas", cfg.replicas.or(Some(10_000)))?;
    let (mean, stderr) = qtasep_estimate(n, q, tau, runs, seed)?;
    let reference = q_moment(1, n, &QTParams::whittaker(q)?, tau).ok();
    let rec = EstimateRecord { quantity: "E q^lambda_N".into(), mean, stderr, replicas: runs, reference };
    Ok(Output::ok(emit(&[rec], cfg.format)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BdParams {
    width: Option<usize>,
    steps: Option<u64>,
    #[serde(default, deserialize_with = "text")]
    sweeps: Option<String>,
}

fn bd(cfg: &RunConfig) -> Result<Output, CliError> {
    let p: BdParams = cfg.typed()?;
    let seed = cfg.require_seed()?;
    let width = count("width", p.width)?;
    let mut rng = RngStream::new(seed);
    match p.sweeps {
        Some(s) => {
            let sweeps: Vec<u64> = parse_list(&s)?;
            let beta = growth_exponent(width, &sweeps, &mut rng)?;
            Ok(Output::ok(emit(&[GrowthRecord { width, beta }], cfg.format)?))
        }
        None => {
            let steps = p.steps.ok_or_else(|| CliError::Validation("--steps or --sweeps is required".into()))?;
            let h = ballistic_deposition(width, steps, &mut rng)?;
            let records: Vec<HeightRecord> =
                h.into_iter().enumerate().map(|(site, height)| HeightRecord { site, height }).collect();
            Ok(Output::ok(emit(&records, cfg.format)?))
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AcceptParams {
    #[serde(default, deserialize_with = "text")]
    only: Option<String>,
}

fn accept(cfg: &RunConfig, log: &mut dyn Write) -> Result<Output, CliError> {
    let p: AcceptParams = cfg.typed()?;
    let ids: Vec<u32> = match p.only {
        Some(s) => parse_list(&s)?,
        None => (1..=acceptance::CRITERIA as u32).collect(),
    };
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > acceptance::CRITERIA as u32) {
        return Err(CliError::Validation(format!("no acceptance criterion {bad}")));
    }
    let seed = cfg.seed.unwrap_or(acceptance::DEFAULT_SEED);
    let records = acceptance::run_suite(&ids, seed, &mut |r| {
        let _ = writeln!(log, "{}", acceptance::summary_line(r));
    });
    let failed = records.iter().any(|r| !r.passed);
    Ok(Output { bytes: emit(&records, cfg.format)?, failed })
}
