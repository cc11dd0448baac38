use super::CONFIG_CAP;
use crate::error::{Error, Result};
use crate::symcore::Partition;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

const POINT_TOL: f64 = 1e-9;

/// P(pts ⊂ X) by direct summation over an explicit list of configurations.
pub fn corr_oracle<C: AsRef<[f64]>>(weights: &[(C, f64)], pts: &[f64]) -> Result<f64> {
    if weights.len() > CONFIG_CAP {
        return Err(Error::Budget(format!("{} configurations exceed cap {CONFIG_CAP}", weights.len())));
    }
    Ok(weights
        .iter()
        .filter(|(c, _)| pts.iter().all(|p| c.as_ref().iter().any(|x| (x - p).abs() < POINT_TOL)))
        .map(|(_, w)| w)
        .sum())
}

/// Whether the half-integer site `m + 1/2` belongs to X(λ) = {λ_i − i + 1/2}.
pub fn site_occupied(lambda: &Partition, m: i64) -> bool {
    let l = lambda.len() as i64;
    if m <= -l - 1 {
        return true;
    }
    (1..=l).any(|i| lambda.part(i as usize - 1) as i64 - i == m)
}

/// Same oracle for measures on partitions, with sites encoded as m ↔ m + 1/2.
pub fn corr_oracle_partitions(weights: &[(Partition, f64)], sites: &[i64]) -> Result<f64> {
    if weights.len() > CONFIG_CAP {
        return Err(Error::Budget(format!("{} configurations exceed cap {CONFIG_CAP}", weights.len())));
    }
    Ok(weights.iter().filter(|(l, _)| sites.iter().all(|&m| site_occupied(l, m))).map(|(_, w)| w).sum())
}

/// Both sides of det[1/(1−x_i y_j)] = ∏_{i<j}(x_i−x_j)(y_i−y_j) / ∏_{i,j}(1−x_i y_j).
pub fn cauchy_determinant(x: &[BigRational], y: &[BigRational]) -> (BigRational, BigRational) {
    let n = x.len();
    let one = BigRational::one();
    let rows: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| &one / (&one - &x[i] * &y[j])).collect()).collect();
    let lhs = crate::linalg::det_rational(&rows);
    let mut rhs = one.clone();
    for i in 0..n {
        for j in i + 1..n {
            rhs *= (&x[i] - &x[j]) * (&y[i] - &y[j]);
        }
        for j in 0..n {
            rhs /= &one - &x[i] * &y[j];
        }
    }
    (lhs, rhs)
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
