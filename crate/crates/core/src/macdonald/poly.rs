use super::params::{qt_inner, QTParams};
use crate::error::{invalid, Error, Result};
use crate::linalg::Mat;
use crate::symcore::{monomial_eval, partitions_of, Partition};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const MAX_DEGREE: u32 = 8;
pub const MAX_VARS: usize = 5;

/// P_λ(·; q, t) with coefficients in the power-sum basis, together with its
/// N-variable monomial expansion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MacPoly {
    pub lambda: Partition,
    pub nvars: usize,
    pub params: QTParams,
    pub power: BTreeMap<Partition, f64>,
    pub monomial: BTreeMap<Partition, f64>,
}

impl MacPoly {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.nvars {
            return Err(invalid!("expected {} coordinates, got {}", self.nvars, x.len()));
        }
        Ok(self.monomial.iter().map(|(mu, c)| c * monomial_eval(mu, x)).sum())
    }

    /// Value at a specialization given by its power sums p_1, p_2, …
    pub fn eval_power_sums(&self, p: impl Fn(u32) -> f64) -> f64 {
        self.power.iter().map(|(nu, c)| c * nu.rows().iter().map(|&k| p(k)).product::<f64>()).sum()
    }

    pub fn inner(&self, other: &MacPoly) -> f64 {
        self.power
            .iter()
            .map(|(nu, c)| c * other.power.get(nu).copied().unwrap_or(0.0) * qt_inner(nu, nu, &self.params))
            .sum()
    }

    /// b_λ = 1/⟨P_λ, P_λ⟩, so that Q_λ = b_λ P_λ.
    pub fn b(&self) -> f64 {
        1.0 / self.inner(self)
    }
}

/// Number of ways to merge the parts of ν into the parts of μ: the
/// coefficient of m_μ in p_ν.
fn p_to_m(nu: &Partition, mu: &Partition) -> f64 {
    fn rec(parts: &[u32], left: &mut Vec<u32>) -> u64 {
        let Some((&first, rest)) = parts.split_first() else {
            return left.iter().all(|&x| x == 0) as u64;
        };
        let mut n = 0;
        for j in 0..left.len() {
            if left[j] >= first {
                left[j] -= first;
                n += rec(rest, left);
                left[j] += first;
            }
        }
        n
    }
    if nu.size() != mu.size() {
        return 0.0;
    }
    rec(nu.rows(), &mut mu.rows().to_vec()) as f64
}

/// Macdonald P_λ by Gram–Schmidt on monomials, ordered lexicographically,
/// under the (q,t) scalar product.
#[allow(non_snake_case)]
pub fn macdonald_P(lambda: &Partition, nvars: usize, params: &QTParams) -> Result<MacPoly> {
    let n = lambda.size();
    if n > MAX_DEGREE || nvars > MAX_VARS {
        return Err(Error::Budget(format!("|λ| = {n}, N = {nvars}: supported up to |λ| ≤ {MAX_DEGREE}, N ≤ {MAX_VARS}")));
    }
    if nvars == 0 {
        return Err(invalid!("need at least one variable"));
    }
    // increasing lexicographic order
    let mut parts = partitions_of(n, None)?;
    parts.sort_by(|a, b| a.rows().cmp(b.rows()));
    let d = parts.len();
    let r = Mat::from_fn(d, |i, j| p_to_m(&parts[i], &parts[j]));
    // m_μ = Σ_ν A[μ][ν] p_ν
    let a = r.inverse().ok_or_else(|| Error::Invariant("power-sum transition is singular".into()))?;
    let z: Vec<f64> = parts.iter().map(|p| params.z(p)).collect();
    let gram = Mat::from_fn(d, |i, j| (0..d).map(|k| a.get(i, k) * a.get(j, k) * z[k]).sum::<f64>());
    let top = parts.iter().position(|p| p == lambda).expect("λ is a partition of |λ|");
    // c_top = 1; Σ_{j ≤ top} c_j ⟨m_i, m_j⟩ = 0 for i < top
    let mut c = vec![0.0; d];
    c[top] = 1.0;
    if top > 0 {
        let g = Mat::from_fn(top, |i, j| gram.get(i, j));
        let gi = g.inverse().ok_or_else(|| Error::Invariant("singular Gram matrix".into()))?;
        for i in 0..top {
            c[i] = -(0..top).map(|j| gi.get(i, j) * gram.get(j, top)).sum::<f64>();
        }
    }
    let mut power = BTreeMap::new();
    for k in 0..d {
        let v: f64 = (0..=top).map(|i| c[i] * a.get(i, k)).sum();
        if v != 0.0 {
            power.insert(parts[k].clone(), v);
        }
    }
    let monomial = (0..=top)
        .filter(|&i| parts[i].len() <= nvars && c[i] != 0.0)
        .map(|i| (parts[i].clone(), c[i]))
        .collect();
    Ok(MacPoly { lambda: lambda.clone(), nvars, params: *params, power, monomial })
}
