use crate::error::{invalid, Error, Result};
use crate::rng::RngStream;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Time steps of the Brownian grid.
pub const GRID_STEPS: usize = 1 << 12;
pub const MAX_N: usize = 10;
pub const MAX_T: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub paths: usize,
    pub warning: Option<String>,
}

impl McEstimate {
    pub fn from_samples(v: &[f64]) -> Self {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        let stderr = (var / n).sqrt();
        let warning = if !mean.is_finite() || !stderr.is_finite() {
            Some("non-finite sample; variance overflow".to_string())
        } else if stderr > mean.abs() {
            Some(format!("standard error {stderr:e} exceeds the mean"))
        } else {
            None
        };
        McEstimate { mean, stderr, paths: v.len(), warning }
    }
}

/// One draw of the importance-sampled partition function: an ordered tuple
/// s_1 < … < s_{N−1} uniform on the simplex, snapped to the grid, weighted by
/// the simplex volume. Brownian increments over whole runs of grid cells are
/// drawn in aggregate, which has the same law as walking the grid.
fn oy_draw(n: usize, t: f64, rng: &mut RngStream) -> f64 {
    let dt = t / GRID_STEPS as f64;
    let mut cuts: Vec<usize> = (0..n - 1).map(|_| (rng.random::<f64>() * GRID_STEPS as f64) as usize).collect();
    cuts.sort_unstable();
    let volume = t.powi(n as i32 - 1) / (1..n).map(|i| i as f64).product::<f64>();
    let mut prev = 0;
    let mut exponent = 0.0;
    for &c in cuts.iter().chain(std::iter::once(&GRID_STEPS)) {
        let z: f64 = rng.sample(StandardNormal);
        exponent += z * (dt * (c - prev) as f64).sqrt();
        prev = c;
    }
    volume * exponent.exp()
}

/// Monte Carlo for E Z of the semidiscrete Brownian polymer
/// Z = ∫_{0<s_1<…<s_{N−1}<t} exp(B_1(0,s_1) + … + B_N(s_{N−1},t)) ds.
/// Path k uses `rng.split(k)`, so results do not depend on thread count.
pub fn oy_polymer_mc(n: usize, t_end: f64, n_paths: usize, rng: &RngStream) -> Result<McEstimate> {
    if n == 0 || !(t_end >= 0.0) || n_paths < 2 {
        return Err(invalid!("need N ≥ 1, t ≥ 0 and at least two paths"));
    }
    if n > MAX_N || t_end > MAX_T {
        return Err(Error::Budget(format!("N = {n}, t = {t_end}: supported up to N ≤ {MAX_N}, t ≤ {MAX_T}")));
    }
    let samples: Vec<f64> =
        (0..n_paths).into_par_iter().map(|k| oy_draw(n, t_end, &mut rng.split(k as u64))).collect();
    Ok(McEstimate::from_samples(&samples))
}
