use super::partition::Partition;
use super::specialization::Specialization;
use crate::error::{Error, Result};
use crate::linalg::{Mat, Scalar};

/// Relative gap below which two evaluation points count as coincident for the
/// bialternant.
const COINCIDENT_GAP: f64 = 1e-3;

/// s_λ(x_1..x_N). Uses the bialternant when the points are well separated and
/// Jacobi–Trudi otherwise.
pub fn schur_eval<T: Scalar>(lambda: &Partition, x: &[T]) -> T {
    if lambda.len() > x.len() {
        return T::zero();
    }
    if lambda.is_empty() {
        return T::one();
    }
    let scale = x.iter().map(|v| v.modulus()).fold(0.0, f64::max).max(1e-300);
    let separated = (0..x.len())
        .all(|i| (i + 1..x.len()).all(|j| (x[i] - x[j]).modulus() > COINCIDENT_GAP * scale));
    if separated {
        schur_bialternant(lambda, x)
    } else {
        schur_jacobi_trudi(lambda, x)
    }
}

/// det[x_i^{λ_j+N−j}] / det[x_i^{N−j}].
pub fn schur_bialternant<T: Scalar>(lambda: &Partition, x: &[T]) -> T {
    let n = x.len();
    if lambda.len() > n {
        return T::zero();
    }
    let num = Mat::from_fn(n, |i, j| pow(x[i], lambda.part(j) as usize + n - 1 - j));
    let den = Mat::from_fn(n, |i, j| pow(x[i], n - 1 - j));
    num.det() / den.det()
}

/// det[h_{λ_i−i+j}(x)].
pub fn schur_jacobi_trudi<T: Scalar>(lambda: &Partition, x: &[T]) -> T {
    if lambda.len() > x.len() {
        return T::zero();
    }
    let l = lambda.len();
    let h = complete_homogeneous(x, lambda.first() as usize + l);
    Mat::from_fn(l, |i, j| {
        let k = lambda.part(i) as i64 - i as i64 + j as i64;
        if k < 0 {
            T::zero()
        } else {
            h[k as usize]
        }
    })
    .det()
}

/// h_0..h_d of the variables x.
pub fn complete_homogeneous<T: Scalar>(x: &[T], d: usize) -> Vec<T> {
    let mut h = vec![T::zero(); d + 1];
    h[0] = T::one();
    for &xi in x {
        for k in 1..=d {
            h[k] = h[k] + xi * h[k - 1];
        }
    }
    h
}

fn pow<T: Scalar>(x: T, k: usize) -> T {
    let mut r = T::one();
    for _ in 0..k {
        r = r * x;
    }
    r
}

/// Cached h_k(ρ) and e_k(ρ) for repeated skew Schur evaluations.
#[derive(Clone, Debug)]
pub struct SpecTable {
    spec: Specialization,
    h: Vec<f64>,
    e: Vec<f64>,
}

impl SpecTable {
    pub fn new(spec: &Specialization, degree: usize) -> Self {
        SpecTable { spec: spec.clone(), h: spec.h_series(degree), e: spec.e_series(degree) }
    }

    pub fn spec(&self) -> &Specialization {
        &self.spec
    }

    fn grow(&mut self, d: usize) {
        if d >= self.h.len() {
            let d = d.max(2 * self.h.len());
            self.h = self.spec.h_series(d);
            self.e = self.spec.e_series(d);
        }
    }

    /// s_{λ/μ}(ρ).
    pub fn skew(&mut self, lambda: &Partition, mu: &Partition) -> f64 {
        if !lambda.contains(mu) {
            return 0.0;
        }
        let n = (lambda.size() - mu.size()) as usize;
        if n == 0 {
            return 1.0;
        }
        let s = &self.spec;
        // single-parameter shortcuts: strip supports are exact
        if s.gamma() == 0.0 && s.beta().is_empty() && s.alpha().len() == 1 {
            return if lambda.is_horizontal_strip_over(mu) { s.alpha()[0].powi(n as i32) } else { 0.0 };
        }
        if s.gamma() == 0.0 && s.alpha().is_empty() && s.beta().len() == 1 {
            return if lambda.is_vertical_strip_over(mu) { s.beta()[0].powi(n as i32) } else { 0.0 };
        }
        if s.is_trivial() {
            return 0.0;
        }
        if let Some(m) = s.max_length() {
            let (lc, mc) = (lambda.conjugate(), mu.conjugate());
            if (0..lc.len()).any(|j| (lc.part(j) - mc.part(j)) as usize > m) {
                return 0.0;
            }
        }
        if let Some(m) = s.max_first_row() {
            if (0..lambda.len()).any(|i| (lambda.part(i) - mu.part(i)) as usize > m) {
                return 0.0;
            }
        }
        self.grow(lambda.first() as usize + lambda.len());
        let v = if lambda.first() as usize >= lambda.len() {
            jt(&self.h, lambda, mu)
        } else {
            jt(&self.e, &lambda.conjugate(), &mu.conjugate())
        };
        // Schur positivity: only roundoff can make this negative
        v.max(0.0)
    }
}

fn jt(h: &[f64], lambda: &Partition, mu: &Partition) -> f64 {
    let l = lambda.len();
    Mat::from_fn(l, |i, j| {
        let k = lambda.part(i) as i64 - mu.part(j) as i64 - i as i64 + j as i64;
        if k < 0 {
            0.0
        } else {
            h[k as usize]
        }
    })
    .det()
}

/// s_{λ/μ}(ρ) via det[h_{λ_i−μ_j−i+j}(ρ)]; zero unless μ ⊂ λ.
pub fn skew_schur_spec(lambda: &Partition, mu: &Partition, rho: &Specialization) -> f64 {
    SpecTable::new(rho, lambda.first() as usize + lambda.len()).skew(lambda, mu)
}

pub fn schur_spec(lambda: &Partition, rho: &Specialization) -> f64 {
    skew_schur_spec(lambda, &Partition::empty(), rho)
}

/// H(ρ1; ρ2) = exp(Σ p_k(ρ1)p_k(ρ2)/k), evaluated in closed product form.
/// Rejects pairs whose series diverges (α·α' ≥ 1 or β·β' ≥ 1).
pub fn pair_h(r1: &Specialization, r2: &Specialization) -> Result<f64> {
    pair_h_log(r1, r2).map(f64::exp)
}

pub fn pair_h_log(r1: &Specialization, r2: &Specialization) -> Result<f64> {
    if r1.max_alpha() * r2.max_alpha() >= 1.0 || r1.max_beta() * r2.max_beta() >= 1.0 {
        return Err(Error::Validation(format!(
            "divergent specialization pair: alpha product {}, beta product {}",
            r1.max_alpha() * r2.max_alpha(),
            r1.max_beta() * r2.max_beta()
        )));
    }
    let sum1: f64 = r1.alpha().iter().chain(r1.beta()).sum();
    let sum2: f64 = r2.alpha().iter().chain(r2.beta()).sum();
    let mut l = r1.gamma() * r2.gamma() + r1.gamma() * sum2 + r2.gamma() * sum1;
    for &a in r1.alpha() {
        for &b in r2.alpha() {
            l -= (-a * b).ln_1p();
        }
        for &b in r2.beta() {
            l += (a * b).ln_1p();
        }
    }
    for &a in r1.beta() {
        for &b in r2.beta() {
            l -= (-a * b).ln_1p();
        }
        for &b in r2.alpha() {
            l += (a * b).ln_1p();
        }
    }
    Ok(l)
}

/// exp(Σ_{k≤K} p_k p'_k / k): the defining series, truncated.
pub fn pair_h_series(r1: &Specialization, r2: &Specialization, terms: u32) -> f64 {
    (1..=terms).map(|k| r1.p(k) * r2.p(k) / k as f64).sum::<f64>().exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::partitions_up_to;

    fn p(rows: &[u32]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn basic_values() {
        assert!((schur_eval(&p(&[1]), &[0.3, 0.9]) - 1.2).abs() < 1e-14);
        assert!((schur_eval(&p(&[2, 1]), &[1.0, 1.0]) - 2.0).abs() < 1e-14);
        assert_eq!(schur_eval(&Partition::empty(), &[0.3, 4.0]), 1.0);
        assert_eq!(schur_eval(&p(&[1, 1, 1]), &[1.0, 2.0]), 0.0);
    }

    #[test]
    fn skew_strip_rules() {
        let a = Specialization::single_alpha(0.7).unwrap();
        assert!((skew_schur_spec(&p(&[3, 1]), &p(&[1]), &a) - 0.343).abs() < 1e-15);
        assert_eq!(skew_schur_spec(&p(&[1, 1]), &Partition::empty(), &a), 0.0);
        assert_eq!(skew_schur_spec(&p(&[2]), &p(&[2]), &a), 1.0);
        assert_eq!(skew_schur_spec(&p(&[2]), &p(&[1, 1]), &a), 0.0);
    }

    #[test]
    fn finite_spec_matches_eval() {
        let xs = [0.3, 0.5, 0.11];
        let s = Specialization::finite(xs.to_vec()).unwrap();
        for l in partitions_up_to(6, None).unwrap() {
            let a = schur_spec(&l, &s);
            let b = schur_eval(&l, &xs);
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-3), "{l}: {a} vs {b}");
        }
    }

    #[test]
    fn pair_h_forms_agree() {
        let g = Specialization::pure_gamma(0.8).unwrap();
        assert!((pair_h(&g, &g).unwrap() - (0.64f64).exp()).abs() < 1e-14);
        let h = Specialization::single_alpha(0.5).unwrap();
        assert!((pair_h(&h, &h).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        assert_eq!(pair_h(&h, &Specialization::trivial()).unwrap(), 1.0);
        let r1 = Specialization::thoma(vec![0.3, 0.2], vec![0.4], 0.5).unwrap();
        let r2 = Specialization::thoma(vec![0.6], vec![0.25, 0.1], 0.2).unwrap();
        let a = pair_h(&r1, &r2).unwrap();
        let b = pair_h_series(&r1, &r2, 80);
        assert!((a - b).abs() < 1e-12 * a);
        let big = Specialization::single_alpha(2.0).unwrap();
        assert_eq!(pair_h(&big, &h).unwrap_err().code(), "validation");
    }
}
