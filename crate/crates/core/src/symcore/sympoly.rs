use super::partition::{partitions_of, Partition};
use crate::error::{Error, Result};
use crate::linalg::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// Keys are orbit representatives (exponent vectors sorted decreasingly).
    Monomial,
    /// Keys index p_λ = ∏ p_{λ_i}.
    PowerSum,
}

/// Symmetric polynomial of bounded degree with exact rational coefficients.
/// In the monomial basis `nvars` is the number of variables; in the
/// power-sum basis it is ignored and set to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SymPoly {
    basis: Basis,
    nvars: usize,
    max_degree: u32,
    terms: BTreeMap<Partition, BigRational>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl SymPoly {
    pub fn zero(basis: Basis, nvars: usize, max_degree: u32) -> Self {
        let nvars = if basis == Basis::PowerSum { 0 } else { nvars };
        SymPoly { basis, nvars, max_degree, terms: BTreeMap::new() }
    }

    pub fn one(basis: Basis, nvars: usize, max_degree: u32) -> Self {
        let mut s = Self::zero(basis, nvars, max_degree);
        s.terms.insert(Partition::empty(), BigRational::one());
        s
    }

    fn single(basis: Basis, nvars: usize, max_degree: u32, key: Partition, c: BigRational) -> Result<Self> {
        let mut s = Self::zero(basis, nvars, max_degree);
        s.insert(key, c)?;
        Ok(s)
    }

    fn insert(&mut self, key: Partition, c: BigRational) -> Result<()> {
        if key.size() > self.max_degree {
            return Err(Error::Budget(format!("degree {} exceeds declared max {}", key.size(), self.max_degree)));
        }
        if self.basis == Basis::Monomial && key.len() > self.nvars {
            return Ok(());
        }
        let e = self.terms.entry(key).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    /// m_λ in N variables.
    pub fn monomial(lambda: &Partition, nvars: usize, max_degree: u32) -> Result<Self> {
        Self::single(Basis::Monomial, nvars, max_degree, lambda.clone(), BigRational::one())
    }

    /// p_λ in the power-sum basis.
    pub fn power_sum(lambda: &Partition, max_degree: u32) -> Result<Self> {
        Self::single(Basis::PowerSum, 0, max_degree, lambda.clone(), BigRational::one())
    }

    /// e_k, h_k or p_k in N variables, monomial basis.
    pub fn e_mono(k: u32, nvars: usize, max_degree: u32) -> Result<Self> {
        Self::monomial(&Partition::column(k), nvars, max_degree)
    }

    pub fn h_mono(k: u32, nvars: usize, max_degree: u32) -> Result<Self> {
        let mut s = Self::zero(Basis::Monomial, nvars, max_degree);
        for l in partitions_of(k, Some(nvars))? {
            s.insert(l, BigRational::one())?;
        }
        Ok(s)
    }

    pub fn p_mono(k: u32, nvars: usize, max_degree: u32) -> Result<Self> {
        Self::monomial(&Partition::row(k), nvars, max_degree)
    }

    /// h_k = Σ_{|λ|=k} p_λ / z_λ.
    pub fn h_power(k: u32, max_degree: u32) -> Result<Self> {
        let mut s = Self::zero(Basis::PowerSum, 0, max_degree);
        for l in partitions_of(k, None)? {
            let z = l.z() as i64;
            s.insert(l, rat(1, z))?;
        }
        Ok(s)
    }

    /// e_k = Σ_{|λ|=k} (−1)^{k−ℓ(λ)} p_λ / z_λ.
    pub fn e_power(k: u32, max_degree: u32) -> Result<Self> {
        let mut s = Self::zero(Basis::PowerSum, 0, max_degree);
        for l in partitions_of(k, None)? {
            let sign = if (k as usize - l.len()) % 2 == 0 { 1 } else { -1 };
            let z = l.z() as i64;
            s.insert(l, rat(sign, z))?;
        }
        Ok(s)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Partition, BigRational> {
        &self.terms
    }

    pub fn coeff(&self, key: &Partition) -> BigRational {
        self.terms.get(key).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn compatible(&self, o: &SymPoly) -> Result<()> {
        if self.basis != o.basis || self.nvars != o.nvars {
            return Err(Error::Validation("symmetric polynomials live in different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &SymPoly) -> Result<SymPoly> {
        self.compatible(o)?;
        let mut r = self.clone();
        r.max_degree = self.max_degree.max(o.max_degree);
        for (k, v) in &o.terms {
            r.insert(k.clone(), v.clone())?;
        }
        Ok(r)
    }

    pub fn scale(&self, c: &BigRational) -> SymPoly {
        let mut r = self.clone();
        r.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).filter(|(_, v)| !v.is_zero()).collect();
        r
    }

    pub fn sub(&self, o: &SymPoly) -> Result<SymPoly> {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn mul(&self, o: &SymPoly) -> Result<SymPoly> {
        self.compatible(o)?;
        let mut r = Self::zero(self.basis, self.nvars, self.max_degree.max(o.max_degree));
        match self.basis {
            Basis::PowerSum => {
                for (a, ca) in &self.terms {
                    for (b, cb) in &o.terms {
                        r.insert(a.union(b), ca * cb)?;
                    }
                }
            }
            Basis::Monomial => {
                let n = self.nvars;
                for (a, ca) in &self.terms {
                    let orbit = monomial_orbit(a, n);
                    for (b, cb) in &o.terms {
                        let c = ca * cb;
                        for ob in monomial_orbit(b, n) {
                            let mut ab: Vec<u32> = (0..n).map(|i| ob[i]).collect();
                            for oa in &orbit {
                                for i in 0..n {
                                    ab[i] = oa[i] + ob[i];
                                }
                                // keep only the sorted representative of each product orbit
                                if ab.windows(2).all(|w| w[0] >= w[1]) {
                                    r.insert(Partition::from_sorted(ab.clone()), c.clone())?;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(r)
    }

    /// Expand a power-sum element into N-variable monomials.
    pub fn to_monomial(&self, nvars: usize) -> Result<SymPoly> {
        if self.basis == Basis::Monomial {
            return Ok(self.clone());
        }
        let mut out = Self::zero(Basis::Monomial, nvars, self.max_degree);
        for (l, c) in &self.terms {
            let mut term = Self::one(Basis::Monomial, nvars, self.max_degree);
            for &k in l.rows() {
                term = term.mul(&Self::p_mono(k, nvars, self.max_degree)?)?;
            }
            out = out.add(&term.scale(c))?;
        }
        Ok(out)
    }

    /// Value at a point (monomial basis only).
    pub fn eval<T: Scalar>(&self, x: &[T]) -> Result<T> {
        if self.basis != Basis::Monomial || x.len() != self.nvars {
            return Err(Error::Validation("evaluation needs a monomial-basis polynomial and nvars points".into()));
        }
        let mut acc = T::zero();
        for (l, c) in &self.terms {
            let cf = c.to_f64().unwrap_or(f64::NAN);
            acc = acc + monomial_eval(l, x) * T::from_f64(cf);
        }
        Ok(acc)
    }
}

/// Distinct permutations of λ padded with zeros to length N.
pub fn monomial_orbit(lambda: &Partition, nvars: usize) -> Vec<Vec<u32>> {
    if lambda.len() > nvars {
        return Vec::new();
    }
    let mut v: Vec<u32> = (0..nvars).map(|i| lambda.part(i)).collect();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

fn next_permutation(v: &mut [u32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// m_λ(x).
pub fn monomial_eval<T: Scalar>(lambda: &Partition, x: &[T]) -> T {
    let mut acc = T::zero();
    for e in monomial_orbit(lambda, x.len()) {
        let mut t = T::one();
        for (xi, &k) in x.iter().zip(&e) {
            for _ in 0..k {
                t = t * *xi;
            }
        }
        acc = acc + t;
    }
    acc
}
