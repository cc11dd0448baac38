use super::rsk::{lis_length, rsk_shape};
use crate::error::{invalid, Result};
use crate::symcore::Partition;
use crate::RngStream;
use rand::seq::SliceRandom;
use rand_distr::{Distribution, Poisson};

fn poisson_size(theta: f64, rng: &mut RngStream) -> Result<usize> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(invalid!("theta must be positive and finite, got {theta}"));
    }
    let p = Poisson::new(theta * theta).map_err(|e| invalid!("{e}"))?;
    Ok(p.sample(rng) as usize)
}

/// Uniformly random permutation of 1..=n.
pub fn random_permutation(n: usize, rng: &mut RngStream) -> Vec<i64> {
    let mut w: Vec<i64> = (1..=n as i64).collect();
    w.shuffle(rng);
    w
}

/// Poissonized Plancherel measure: |λ| ~ Poisson(θ²), then the RSK shape of
/// a uniform permutation of that size.
pub fn sample_plancherel(theta: f64, rng: &mut RngStream) -> Result<Partition> {
    let n = poisson_size(theta, rng)?;
    Ok(rsk_shape(&random_permutation(n, rng)))
}

/// λ_1 alone, from the same draws as `sample_plancherel` (equal seeds give
/// equal first rows) but by patience sorting.
pub fn sample_plancherel_first_row(theta: f64, rng: &mut RngStream) -> Result<u32> {
    let n = poisson_size(theta, rng)?;
    Ok(lis_length(&random_permutation(n, rng)) as u32)
}
