use super::params::QTParams;
use crate::error::{invalid, Error, Result};
use crate::symcore::Specialization;

const MAX_TERMS: u32 = 100_000;

/// H_{q,t}(ρ1; ρ2) = exp(Σ_k (1−t^k)/(1−q^k) p_k(ρ1) p_k(ρ2) / k).
pub fn qt_pair_h(r1: &Specialization, r2: &Specialization, params: &QTParams) -> Result<f64> {
    let ratio = r1.growth_radius() * r2.growth_radius();
    if ratio >= 1.0 {
        return Err(invalid!("divergent specialization pair: growth ratio {ratio}"));
    }
    let (q, t) = (params.q(), params.t());
    let mut sum = 0.0;
    for k in 1..=MAX_TERMS {
        let c = (1.0 - t.powi(k as i32)) / (1.0 - q.powi(k as i32));
        let term = c * r1.p(k) * r2.p(k) / k as f64;
        sum += term;
        // remaining terms are bounded by a geometric series in `ratio`
        let tail = ratio.powi(k as i32 + 1) / (1.0 - ratio) * (r1.alpha().len() + r1.beta().len()).max(1) as f64
            * (r2.alpha().len() + r2.beta().len()).max(1) as f64
            / (1.0 - q);
        if k > 1 && tail < 1e-17 * sum.abs().max(1.0) {
            return Ok(sum.exp());
        }
    }
    Err(Error::NonConvergence(format!("(q,t) Cauchy series not converged after {MAX_TERMS} terms")))
}

/// The specialization with Π(x; ρ) = e^{τ p_1(x)} under the (q,t) kernel.
pub fn macdonald_plancherel(tau: f64, params: &QTParams) -> Result<Specialization> {
    Specialization::pure_gamma(tau * (1.0 - params.q()) / (1.0 - params.t()))
}
