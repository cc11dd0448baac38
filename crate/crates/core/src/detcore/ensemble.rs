use super::kernel_matrix::{choose, KernelMatrix, StateSpace};
use super::CONFIG_CAP;
use crate::error::{invalid, Error, Result};
use crate::linalg::Mat;

/// Largest Gram condition number accepted.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

/// N-point biorthogonal ensemble on a finite ground set:
/// P(S) ∝ det[φ_i(x_s)] det[ψ_i(x_s)] ∏_{s∈S} μ(x_s).
#[derive(Clone, Debug)]
pub struct FiniteEnsemble {
    points: Vec<f64>,
    phi: Vec<Vec<f64>>,
    psi: Vec<Vec<f64>>,
    mu: Vec<f64>,
    gram: Mat<f64>,
    gram_inv: Mat<f64>,
    condition: f64,
}

impl FiniteEnsemble {
    pub fn new(points: Vec<f64>, phi: Vec<Vec<f64>>, psi: Vec<Vec<f64>>, mu: Vec<f64>) -> Result<Self> {
        let m = points.len();
        let n = phi.len();
        if n == 0 || psi.len() != n {
            return Err(invalid!("phi and psi must have the same positive number of functions"));
        }
        if phi.iter().chain(&psi).any(|r| r.len() != m) || mu.len() != m {
            return Err(invalid!("function tables must have one value per ground point"));
        }
        if mu.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(invalid!("weights mu must be positive"));
        }
        let gram = Mat::from_fn(n, |i, j| (0..m).map(|x| phi[i][x] * psi[j][x] * mu[x]).sum());
        let (gram_inv, condition) = gram
            .inverse_with_cond()
            .ok_or_else(|| Error::Validation("singular Gram matrix (condition number infinite)".into()))?;
        if condition > MAX_GRAM_CONDITION {
            return Err(Error::Validation(format!("singular Gram matrix: condition number {condition:.3e}")));
        }
        Ok(FiniteEnsemble { points, phi, psi, mu, gram, gram_inv, condition })
    }

    pub fn n(&self) -> usize {
        self.phi.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn gram(&self) -> &Mat<f64> {
        &self.gram
    }

    /// 1-norm condition number of the Gram matrix.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Probability of the configuration given by ground-set indices.
    /// Normalized by Cauchy–Binet: Σ_S det Φ_S det Ψ_S ∏μ = det G.
    pub fn probability(&self, subset: &[usize]) -> f64 {
        let n = self.n();
        let a = Mat::from_fn(n, |i, j| self.phi[i][subset[j]]).det();
        let b = Mat::from_fn(n, |i, j| self.psi[i][subset[j]]).det();
        let w: f64 = subset.iter().map(|&s| self.mu[s]).product();
        a * b * w / self.gram.det()
    }

    /// Every N-subset of the ground set with its probability.
    pub fn configurations(&self) -> Result<Vec<(Vec<f64>, f64)>> {
        let (m, n) = (self.points.len(), self.n());
        if choose(m, n) > CONFIG_CAP as u128 {
            return Err(Error::Budget(format!("C({m},{n}) configurations exceed cap {CONFIG_CAP}")));
        }
        let mut out = Vec::new();
        let mut comb: Vec<usize> = (0..n).collect();
        loop {
            let pts = comb.iter().map(|&i| self.points[i]).collect();
            out.push((pts, self.probability(&comb)));
            let mut i = n;
            while i > 0 && comb[i - 1] == m - n + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            comb[i - 1] += 1;
            for j in i..n {
                comb[j] = comb[j - 1] + 1;
            }
        }
        Ok(out)
    }
}

/// K(x,y) = √μ(x)μ(y) Σ_{ij} φ_i(x) ψ_j(y) [G^{-t}]_{ij}.
/// The √μ gauge makes det[K(x_a,x_b)] the probability that all x_a are present.
pub fn biorth_kernel(e: &FiniteEnsemble) -> KernelMatrix {
    let m = e.points.len();
    let n = e.n();
    let values = Mat::from_fn(m, |x, y| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += e.phi[i][x] * e.psi[j][y] * e.gram_inv.get(j, i);
            }
        }
        s * (e.mu[x] * e.mu[y]).sqrt()
    });
    KernelMatrix::new(e.points.clone(), StateSpace::Real, values).expect("finite kernel")
}
