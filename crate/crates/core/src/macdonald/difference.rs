use super::params::QTParams;
use super::poly::macdonald_P;
use crate::error::{invalid, Error, Result};
use crate::symcore::Partition;

/// Shift applied to coincident coordinates before extrapolating back.
pub const JITTER: f64 = 1e-8;
const COINCIDENT: f64 = 1e-12;

fn d1_distinct(f: &dyn Fn(&[f64]) -> f64, params: &QTParams, x: &[f64]) -> f64 {
    let (q, t) = (params.q(), params.t());
    let mut y = x.to_vec();
    let mut total = 0.0;
    for i in 0..x.len() {
        let mut c = 1.0;
        for j in 0..x.len() {
            if j != i {
                c *= (t * x[i] - x[j]) / (x[i] - x[j]);
            }
        }
        y[i] = q * x[i];
        total += c * f(&y);
        y[i] = x[i];
    }
    total
}

/// (D_1 f)(x) = Σ_i ∏_{j≠i} (t x_i − x_j)/(x_i − x_j) f(…, q x_i, …).
///
/// Coincident coordinates are spread by multiples of `JITTER` and the value is
/// Richardson-extrapolated to zero spread.
pub fn apply_d1(f: &dyn Fn(&[f64]) -> f64, params: &QTParams, x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(invalid!("empty point"));
    }
    let close = |y: &[f64]| {
        (0..y.len()).any(|i| (0..i).any(|j| (y[i] - y[j]).abs() <= COINCIDENT * (1.0 + y[i].abs())))
    };
    if !close(x) {
        return Ok(d1_distinct(f, params, x));
    }
    let spread = |h: f64| -> Vec<f64> { x.iter().enumerate().map(|(i, v)| v + h * i as f64).collect() };
    let (a, b) = (spread(JITTER), spread(2.0 * JITTER));
    if close(&a) || close(&b) {
        return Err(Error::NonConvergence("coordinates still coincide after jitter".into()));
    }
    Ok(2.0 * d1_distinct(f, params, &a) - d1_distinct(f, params, &b))
}

/// e_1(q^{λ_1} t^{N−1}, …, q^{λ_N} t^0).
pub fn d1_eigenvalue(lambda: &Partition, nvars: usize, params: &QTParams) -> f64 {
    (0..nvars).map(|i| params.q().powi(lambda.part(i) as i32) * params.t().powi((nvars - 1 - i) as i32)).sum()
}

/// |D_1 P_λ(x) − e_1(…) P_λ(x)| / |P_λ(x)|.
pub fn eigen_check(lambda: &Partition, nvars: usize, params: &QTParams, x: &[f64]) -> Result<f64> {
    if x.len() != nvars {
        return Err(invalid!("expected {nvars} coordinates"));
    }
    let p = macdonald_P(lambda, nvars, params)?;
    let f = |y: &[f64]| p.eval(y).unwrap_or(f64::NAN);
    let px = f(x);
    let lhs = apply_d1(&f, params, x)?;
    Ok((lhs - d1_eigenvalue(lambda, nvars, params) * px).abs() / px.abs())
}
