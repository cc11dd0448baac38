use super::params::QTParams;
use crate::error::{invalid, Error, Result};
use crate::symcore::{partitions_in_box, Partition};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Largest truncation tail accepted by the expectation oracle.
pub const ORACLE_TAIL: f64 = 1e-10;

/// (q;q)_n.
pub fn q_factorial(n: u32, q: f64) -> f64 {
    (1..=n).map(|i| 1.0 - q.powi(i as i32)).product()
}

/// Gaussian binomial [n choose k]_q.
pub fn q_binomial(n: u32, k: u32, q: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| (1.0 - q.powi((n - i) as i32)) / (1.0 - q.powi((i + 1) as i32))).product()
}

/// Branching coefficient ψ_{λ/μ}(q) of q-Whittaker polynomials; zero unless μ ≺ λ.
pub fn qw_branching(lambda: &Partition, mu: &Partition, q: f64) -> f64 {
    if !lambda.is_horizontal_strip_over(mu) {
        return 0.0;
    }
    (0..lambda.len())
        .map(|i| q_binomial(lambda.part(i) - lambda.part(i + 1), lambda.part(i) - mu.part(i), q))
        .product()
}

/// b_λ(q) = ∏ 1/(q;q)_{λ_i − λ_{i+1}}.
pub fn qw_b(lambda: &Partition, q: f64) -> f64 {
    (0..lambda.len()).map(|i| 1.0 / q_factorial(lambda.part(i) - lambda.part(i + 1), q)).product()
}

/// P_λ(1^N; q, 0) for every λ with ℓ(λ) ≤ N and λ_1 ≤ `max_part`, by branching.
pub fn qw_p_ones_table(nvars: usize, max_part: u32, q: f64) -> HashMap<Partition, f64> {
    let mut prev: HashMap<Partition, f64> = HashMap::from([(Partition::empty(), 1.0)]);
    for level in 1..=nvars {
        let mut cur = HashMap::new();
        for lambda in partitions_in_box(level, max_part) {
            let mut v = 0.0;
            // μ interlaces λ: λ_{i+1} ≤ μ_i ≤ λ_i
            let mut mu = vec![0u32; level - 1];
            fn rec(i: usize, l: &Partition, mu: &mut Vec<u32>, prev: &HashMap<Partition, f64>, q: f64, v: &mut f64) {
                if i == mu.len() {
                    let m = Partition::from_sorted(mu.clone());
                    if let Some(p) = prev.get(&m) {
                        *v += p * qw_branching(l, &m, q);
                    }
                    return;
                }
                for x in l.part(i + 1)..=l.part(i) {
                    mu[i] = x;
                    rec(i + 1, l, mu, prev, q, v);
                }
            }
            rec(0, &lambda, &mut mu, &prev, q, &mut v);
            cur.insert(lambda, v);
        }
        prev = cur;
    }
    prev
}

/// P_λ(1^N; q, 0).
pub fn qw_p_ones(lambda: &Partition, nvars: usize, q: f64) -> f64 {
    if lambda.len() > nvars {
        return 0.0;
    }
    qw_p_ones_table(nvars, lambda.first(), q).get(lambda).copied().unwrap_or(0.0)
}

/// Q_λ(ρ_τ; q, 0) for the specialization with Π(x; ρ_τ) = e^{τ p_1(x)}, for
/// all λ with ℓ(λ) ≤ N and λ_1 ≤ `max_part`. Built box by box from the
/// one-box Pieri rule.
pub fn qw_plancherel_q_table(nvars: usize, max_part: u32, tau: f64, q: f64) -> HashMap<Partition, f64> {
    let mut parts = partitions_in_box(nvars, max_part);
    parts.sort_by_key(|p| p.size());
    let mut v: HashMap<Partition, f64> = HashMap::new();
    for lambda in parts {
        if lambda.is_empty() {
            v.insert(lambda, 1.0);
            continue;
        }
        let n = lambda.size() as f64;
        let mut acc = 0.0;
        for i in 0..lambda.len() {
            if lambda.part(i) > lambda.part(i + 1) {
                let mut rows = lambda.rows().to_vec();
                rows[i] -= 1;
                let mu = Partition::from_sorted(rows);
                let pieri = if i == 0 { 1.0 } else { 1.0 - q.powi((lambda.part(i - 1) - lambda.part(i) + 1) as i32) };
                acc += v.get(&mu).copied().unwrap_or(0.0) * pieri;
            }
        }
        v.insert(lambda, acc * tau / n);
    }
    v
}

/// Truncated expectation under the q-Whittaker measure
/// e^{−Nτ} P_λ(1^N) Q_λ(ρ_τ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub value: f64,
    /// total weight of the states summed
    pub mass: f64,
    /// bound on the weight of states beyond the cutoff
    pub tail_bound: f64,
}

/// P(Poisson(m) > c).
fn poisson_tail(m: f64, c: u32) -> f64 {
    let mut term = (-m).exp();
    for j in 1..=c + 1 {
        term *= m / j as f64;
    }
    let mut sum = 0.0;
    let mut j = c + 1;
    while term > 1e-300 && (term > 1e-20 * sum || j < c + 3) {
        sum += term;
        j += 1;
        term *= m / j as f64;
    }
    sum
}

/// Σ over ℓ(λ) ≤ N, λ_1 ≤ cutoff of observable(λ) times the q-Whittaker
/// measure weight. |λ| is Poisson(Nτ) under the measure, which bounds the
/// dropped mass.
pub fn macdonald_expectation_oracle(
    observable: &dyn Fn(&Partition) -> f64,
    nvars: usize,
    params: &QTParams,
    tau: f64,
    cutoff: u32,
) -> Result<OracleValue> {
    if !params.is_whittaker() {
        return Err(invalid!("the oracle covers the t = 0 measure only"));
    }
    if nvars == 0 || !(tau >= 0.0) {
        return Err(invalid!("need N ≥ 1 and τ ≥ 0"));
    }
    let tail_bound = poisson_tail(nvars as f64 * tau, cutoff);
    if tail_bound >= ORACLE_TAIL {
        return Err(Error::Budget(format!("cutoff {cutoff} leaves tail mass up to {tail_bound:e}")));
    }
    let q = params.q();
    let p1 = qw_p_ones_table(nvars, cutoff, q);
    let qq = qw_plancherel_q_table(nvars, cutoff, tau, q);
    let pre = (-(nvars as f64) * tau).exp();
    let (mut value, mut mass) = (0.0, 0.0);
    for (lambda, p) in &p1 {
        let w = pre * p * qq[lambda];
        mass += w;
        value += w * observable(lambda);
    }
    Ok(OracleValue { value, mass, tail_bound })
}
