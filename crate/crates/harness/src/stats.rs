//! Empirical CDFs, Kolmogorov–Smirnov distance and Plancherel limit-shape
//! statistics.

use ipkit_core::detcore::site_occupied;
use ipkit_core::symcore::Partition;
use ipkit_core::{Error, Result};
use serde::{Deserialize, Serialize};

/// Sorted sample; F_n(x) = #{v ≤ x}/n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCDF {
    values: Vec<f64>,
}

impl EmpiricalCDF {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Validation("NaN in sample".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(EmpiricalCDF { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.partition_point(|&v| v <= x) as f64 / self.values.len() as f64
    }
}

/// sup_x |F_n(x) − F(x)|, attained at the sample points from either side.
pub fn ks_distance(e: &EmpiricalCDF, f: &dyn Fn(f64) -> f64) -> Result<f64> {
    if e.is_empty() {
        return Err(Error::Validation("empty sample".into()));
    }
    let n = e.len() as f64;
    let mut d: f64 = 0.0;
    let mut last = f64::NEG_INFINITY;
    for (i, &x) in e.values().iter().enumerate() {
        let fx = f(x);
        if !(0.0..=1.0).contains(&fx) || fx < last - 1e-12 {
            return Err(Error::Validation(format!("reference CDF not monotone in [0,1] at {x}: {fx}")));
        }
        last = fx;
        d = d.max((i as f64 / n - fx).abs()).max(((i + 1) as f64 / n - fx).abs());
    }
    Ok(d.min(1.0))
}

/// Half-width, in units of u, of the window averaged by `limit_shape_profile`.
pub const PROFILE_WINDOW: f64 = 0.05;

/// Fraction of occupied sites of X(λ) = {λ_i − i + 1/2} in the window
/// |x − uθ| ≤ θ·half_width, for each u.
pub fn limit_shape_profile(lambda: &Partition, theta: f64, us: &[f64], half_width: f64) -> Result<Vec<f64>> {
    if !(theta >= 50.0) {
        return Err(Error::Validation(format!("θ = {theta} is below the profile range θ ≥ 50")));
    }
    Ok(us
        .iter()
        .map(|&u| {
            let lo = ((u - half_width) * theta - 0.5).ceil() as i64;
            let hi = ((u + half_width) * theta - 0.5).floor() as i64;
            let count = (lo..=hi).filter(|&m| site_occupied(lambda, m)).count();
            count as f64 / (hi - lo + 1).max(1) as f64
        })
        .collect())
}

/// arccos(u/2)/π on (−2, 2), clamped outside.
pub fn vkls_density(u: f64) -> f64 {
    (u / 2.0).clamp(-1.0, 1.0).acos() / std::f64::consts::PI
}

/// (λ_1 − 2θ)/θ^{1/3}.
pub fn edge_statistic(lambda: &Partition, theta: f64) -> f64 {
    (lambda.first() as f64 - 2.0 * theta) / theta.cbrt()
}

/// Mean and standard error.
pub fn mean_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}
