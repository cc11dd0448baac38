//! Small dense linear algebra: pivoted determinants and inverses for the
//! matrix sizes that occur here (up to a few hundred).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn modulus(self) -> f64;
    fn from_f64(v: f64) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn from_f64(v: f64) -> Self {
        v
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
}

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    pub n: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(n: usize) -> Self {
        Mat { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Mat { n, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| rows[i][j])
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).modulus()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Determinant by partial-pivot elimination.
    pub fn det(&self) -> T {
        let n = self.n;
        if n == 0 {
            return T::one();
        }
        let mut a = self.data.clone();
        let mut det = T::one();
        for c in 0..n {
            let mut p = c;
            let mut best = a[c * n + c].modulus();
            for r in c + 1..n {
                let v = a[r * n + c].modulus();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 {
                return T::zero();
            }
            if p != c {
                for j in 0..n {
                    a.swap(c * n + j, p * n + j);
                }
                det = -det;
            }
            let piv = a[c * n + c];
            det = det * piv;
            for r in c + 1..n {
                let f = a[r * n + c] / piv;
                if f.modulus() == 0.0 {
                    continue;
                }
                for j in c + 1..n {
                    a[r * n + j] = a[r * n + j] - f * a[c * n + j];
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan with partial pivoting; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for c in 0..n {
            let mut p = c;
            let mut best = a[c * n + c].modulus();
            for r in c + 1..n {
                let v = a[r * n + c].modulus();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return None;
            }
            if p != c {
                for j in 0..n {
                    a.swap(c * n + j, p * n + j);
                    inv.swap(c * n + j, p * n + j);
                }
            }
            let piv = a[c * n + c];
            for j in 0..n {
                a[c * n + j] = a[c * n + j] / piv;
                inv[c * n + j] = inv[c * n + j] / piv;
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a[r * n + c];
                if f.modulus() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = a[r * n + j] - f * a[c * n + j];
                    inv[r * n + j] = inv[r * n + j] - f * inv[c * n + j];
                }
            }
        }
        Some(Mat { n, data: inv })
    }

    /// Inverse together with the 1-norm condition number.
    pub fn inverse_with_cond(&self) -> Option<(Self, f64)> {
        let inv = self.inverse()?;
        let cond = self.norm1() * inv.norm1();
        Some((inv, cond))
    }
}

/// Exact determinant over the rationals.
pub fn det_rational(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[r][j] -= t;
            }
        }
    }
    det
}

pub fn det_bigint(rows: &[Vec<BigInt>]) -> BigInt {
    let q: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect()).collect();
    let d = det_rational(&q);
    debug_assert!(d.is_integer());
    d.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse_agree() {
        let m = Mat::from_rows(&[vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 4.0]]);
        assert!((m.det() - 18.0).abs() < 1e-12);
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((id.get(i, j) - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(m.det(), 0.0);
        assert!(m.inverse().is_none());
    }

    #[test]
    fn rational_det() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let m = vec![vec![r(1, 2), r(1, 3)], vec![r(1, 4), r(1, 5)]];
        assert_eq!(det_rational(&m), r(1, 10) - r(1, 12));
    }
}
