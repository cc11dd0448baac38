use super::partition::Partition;
use crate::linalg::det_rational;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Number of standard Young tableaux: |λ|! det[1/(λ_i−i+j)!].
pub fn dim_std(lambda: &Partition) -> BigUint {
    let l = lambda.len();
    let n = lambda.size();
    let rows: Vec<Vec<BigRational>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let k = lambda.part(i) as i64 - i as i64 + j as i64;
                    if k < 0 {
                        BigRational::zero()
                    } else {
                        BigRational::new(BigInt::one(), BigInt::from(factorial(k as u32)))
                    }
                })
                .collect()
        })
        .collect();
    let d = det_rational(&rows) * BigRational::from_integer(BigInt::from(factorial(n)));
    debug_assert!(d.is_integer() && !d.is_negative());
    d.to_integer().to_biguint().expect("dimension is nonnegative")
}

/// s_λ(1^N): semistandard tableaux with entries ≤ N, via Jacobi–Trudi with
/// h_k(1^N) = C(N+k−1, k).
pub fn dim_ssyt(lambda: &Partition, n: u32) -> BigUint {
    if lambda.len() > n as usize {
        return BigUint::zero();
    }
    let l = lambda.len();
    let rows: Vec<Vec<BigRational>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let k = lambda.part(i) as i64 - i as i64 + j as i64;
                    if k < 0 {
                        BigRational::zero()
                    } else {
                        let h = binomial(n as u64 + k as u64 - 1, k as u64);
                        BigRational::from_integer(BigInt::from(h))
                    }
                })
                .collect()
        })
        .collect();
    det_rational(&rows).to_integer().to_biguint().expect("tableau count is nonnegative")
}

pub fn dim_std_f64(lambda: &Partition) -> f64 {
    dim_std(lambda).to_f64().unwrap_or(f64::INFINITY)
}
