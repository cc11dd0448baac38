use crate::error::{invalid, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecMode {
    #[default]
    Thoma,
    FiniteVariables,
}

/// Schur-positive specialization given by Thoma parameters, or by a finite
/// list of nonnegative variables (stored as alphas).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct Specialization {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    gamma: f64,
    mode: SpecMode,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    #[serde(default)]
    alpha: Vec<f64>,
    #[serde(default)]
    beta: Vec<f64>,
    #[serde(default)]
    gamma: f64,
    #[serde(default, skip_serializing_if = "is_thoma")]
    mode: SpecMode,
}

fn is_thoma(m: &SpecMode) -> bool {
    *m == SpecMode::Thoma
}

impl TryFrom<SpecJson> for Specialization {
    type Error = crate::error::Error;
    fn try_from(j: SpecJson) -> Result<Self> {
        let mut s = Specialization::thoma(j.alpha, j.beta, j.gamma)?;
        if j.mode == SpecMode::FiniteVariables {
            if !s.beta.is_empty() || s.gamma != 0.0 {
                return Err(invalid!("finite-variables specialization cannot carry beta or gamma"));
            }
            s.mode = SpecMode::FiniteVariables;
        }
        Ok(s)
    }
}

impl From<Specialization> for SpecJson {
    fn from(s: Specialization) -> SpecJson {
        SpecJson { alpha: s.alpha, beta: s.beta, gamma: s.gamma, mode: s.mode }
    }
}

fn check_params(name: &str, v: &[f64]) -> Result<()> {
    if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(invalid!("{name} parameter {x} must be finite and nonnegative"));
    }
    Ok(())
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.retain(|x| *x != 0.0);
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

impl Specialization {
    pub fn thoma(alpha: Vec<f64>, beta: Vec<f64>, gamma: f64) -> Result<Self> {
        check_params("alpha", &alpha)?;
        check_params("beta", &beta)?;
        check_params("gamma", &[gamma])?;
        Ok(Specialization { alpha: sorted_desc(alpha), beta: sorted_desc(beta), gamma, mode: SpecMode::Thoma })
    }

    pub fn finite(vars: Vec<f64>) -> Result<Self> {
        check_params("variable", &vars)?;
        Ok(Specialization { alpha: sorted_desc(vars), beta: Vec::new(), gamma: 0.0, mode: SpecMode::FiniteVariables })
    }

    pub fn trivial() -> Self {
        Specialization::default()
    }

    pub fn pure_gamma(gamma: f64) -> Result<Self> {
        Self::thoma(vec![], vec![], gamma)
    }

    pub fn single_alpha(a: f64) -> Result<Self> {
        Self::thoma(vec![a], vec![], 0.0)
    }

    pub fn single_beta(b: f64) -> Result<Self> {
        Self::thoma(vec![], vec![b], 0.0)
    }

    /// N variables equal to one.
    pub fn ones(n: usize) -> Self {
        Specialization { alpha: vec![1.0; n], beta: Vec::new(), gamma: 0.0, mode: SpecMode::FiniteVariables }
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn mode(&self) -> SpecMode {
        self.mode
    }

    pub fn is_trivial(&self) -> bool {
        self.alpha.is_empty() && self.beta.is_empty() && self.gamma == 0.0
    }

    /// Union of parameter lists; the specialization of the combined variable set.
    pub fn union(&self, other: &Specialization) -> Specialization {
        let finite = self.mode == SpecMode::FiniteVariables && other.mode == SpecMode::FiniteVariables;
        Specialization {
            alpha: sorted_desc(self.alpha.iter().chain(&other.alpha).copied().collect()),
            beta: sorted_desc(self.beta.iter().chain(&other.beta).copied().collect()),
            gamma: self.gamma + other.gamma,
            mode: if finite { SpecMode::FiniteVariables } else { SpecMode::Thoma },
        }
    }

    /// Largest possible ℓ(λ) with s_λ(ρ) ≠ 0, when finite.
    pub fn max_length(&self) -> Option<usize> {
        (self.beta.is_empty() && self.gamma == 0.0).then_some(self.alpha.len())
    }

    /// Largest possible λ_1 with s_λ(ρ) ≠ 0, when finite.
    pub fn max_first_row(&self) -> Option<usize> {
        (self.alpha.is_empty() && self.gamma == 0.0).then_some(self.beta.len())
    }

    /// (a, b) such that s_λ(ρ) = 0 unless λ_{a+1} ≤ b; needs γ = 0.
    pub fn hook_support(&self) -> Option<(usize, u32)> {
        (self.gamma == 0.0).then_some((self.alpha.len(), self.beta.len() as u32))
    }

    pub fn max_alpha(&self) -> f64 {
        self.alpha.first().copied().unwrap_or(0.0)
    }

    pub fn max_beta(&self) -> f64 {
        self.beta.first().copied().unwrap_or(0.0)
    }

    /// p_k(ρ), k ≥ 1.
    pub fn p(&self, k: u32) -> f64 {
        assert!(k >= 1);
        let a: f64 = self.alpha.iter().map(|x| x.powi(k as i32)).sum();
        let b: f64 = self.beta.iter().map(|x| x.powi(k as i32)).sum();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        a + sign * b + if k == 1 { self.gamma } else { 0.0 }
    }

    /// h_0..h_n from e^{γz} ∏(1+β z)/(1−α z).
    pub fn h_series(&self, n: usize) -> Vec<f64> {
        series(n, self.gamma, &self.beta, &self.alpha)
    }

    /// e_0..e_n; the roles of α and β swap.
    pub fn e_series(&self, n: usize) -> Vec<f64> {
        series(n, self.gamma, &self.alpha, &self.beta)
    }

    /// H(ρ; z) = Σ h_k z^k, valid for |z| α_1 < 1.
    pub fn h_gen(&self, z: Complex64) -> Complex64 {
        let mut v = (z * self.gamma).exp();
        for &b in &self.beta {
            v *= Complex64::new(1.0, 0.0) + z * b;
        }
        for &a in &self.alpha {
            v /= Complex64::new(1.0, 0.0) - z * a;
        }
        v
    }

    /// log H(ρ; z) on the principal branch of each factor.
    pub fn log_h_gen(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut v = z * self.gamma;
        for &b in &self.beta {
            v += (one + z * b).ln();
        }
        for &a in &self.alpha {
            v -= (one - z * a).ln();
        }
        v
    }

    /// Radius r with |p_k(ρ)| ≤ C r^k.
    pub fn growth_radius(&self) -> f64 {
        self.max_alpha().max(self.max_beta())
    }
}

fn series(n: usize, gamma: f64, plus: &[f64], inv: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; n + 1];
    // e^{γz}
    let mut t = 1.0;
    for (k, ck) in c.iter_mut().enumerate() {
        if k > 0 {
            t *= gamma / k as f64;
        }
        *ck = t;
    }
    for &b in plus {
        for k in (1..=n).rev() {
            c[k] += b * c[k - 1];
        }
    }
    for &a in inv {
        for k in 1..=n {
            c[k] += a * c[k - 1];
        }
    }
    c
}
