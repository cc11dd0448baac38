use super::CONFIG_CAP;
use crate::error::{invalid, Error, Result};
use crate::linalg::Mat;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateSpace {
    Integer,
    HalfInteger,
    Real,
}

/// Kernel values K(x,y) on a finite window of points. No symmetry is assumed.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix {
    points: Vec<f64>,
    space: StateSpace,
    values: Mat<f64>,
}

const POINT_TOL: f64 = 1e-9;

impl KernelMatrix {
    pub fn new(points: Vec<f64>, space: StateSpace, values: Mat<f64>) -> Result<Self> {
        if values.n != points.len() {
            return Err(invalid!("kernel table is {}x{}, window has {} points", values.n, values.n, points.len()));
        }
        if values.data.iter().any(|v| !v.is_finite()) {
            return Err(invalid!("kernel has non-finite entries"));
        }
        Ok(KernelMatrix { points, space, values })
    }

    pub fn from_fn(points: Vec<f64>, space: StateSpace, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let n = points.len();
        let values = Mat::from_fn(n, |i, j| f(points[i], points[j]));
        Self::new(points, space, values)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn space(&self) -> StateSpace {
        self.space
    }

    pub fn values(&self) -> &Mat<f64> {
        &self.values
    }

    pub fn index_of(&self, x: f64) -> Result<usize> {
        self.points
            .iter()
            .position(|p| (p - x).abs() < POINT_TOL)
            .ok_or_else(|| invalid!("point {x} is outside the kernel window"))
    }

    pub fn get(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.values.get(self.index_of(x)?, self.index_of(y)?))
    }

    /// K(x,y) ↦ f(x)/f(y) K(x,y).
    pub fn gauge(&self, f: impl Fn(f64) -> f64) -> Self {
        let p = &self.points;
        let values = Mat::from_fn(p.len(), |i, j| f(p[i]) / f(p[j]) * self.values.get(i, j));
        KernelMatrix { points: p.clone(), space: self.space, values }
    }

    /// Header row of state points, then one row per point.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x");
        for p in &self.points {
            write!(s, ",{p}").unwrap();
        }
        s.push('\n');
        for (i, p) in self.points.iter().enumerate() {
            write!(s, "{p}").unwrap();
            for j in 0..self.points.len() {
                write!(s, ",{:e}", self.values.get(i, j)).unwrap();
            }
            s.push('\n');
        }
        s
    }
}

/// ρ_n(x_1..x_n) = det[K(x_i,x_j)].
pub fn corr_det(k: &KernelMatrix, pts: &[f64]) -> Result<f64> {
    let idx: Vec<usize> = pts.iter().map(|&x| k.index_of(x)).collect::<Result<_>>()?;
    for i in 0..idx.len() {
        if idx[i + 1..].contains(&idx[i]) {
            return Err(invalid!("correlation points must be distinct"));
        }
    }
    Ok(Mat::from_fn(idx.len(), |a, b| k.values.get(idx[a], idx[b])).det())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapProbability {
    pub value: f64,
    /// |first omitted inclusion–exclusion term|; zero when the expansion is complete.
    pub next_term: f64,
}

/// P(no particle in `window`) = Σ_n (−1)^n Σ_{|S|=n} det K_S, through `max_order`.
pub fn gap_prob(k: &KernelMatrix, window: &[f64], max_order: usize) -> Result<GapProbability> {
    let idx: Vec<usize> = window.iter().map(|&x| k.index_of(x)).collect::<Result<_>>()?;
    let m = idx.len();
    let order_sum = |n: usize| -> f64 {
        let mut total = 0.0;
        let mut comb: Vec<usize> = (0..n).collect();
        loop {
            total += Mat::from_fn(n, |a, b| k.values.get(idx[comb[a]], idx[comb[b]])).det();
            // next combination
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
        total
    };
    let top = max_order.min(m);
    let subsets: u128 = (1..=(top + 1).min(m)).map(|n| choose(m, n)).sum();
    if subsets > CONFIG_CAP as u128 {
        return Err(Error::Budget(format!("{subsets} inclusion-exclusion terms exceed cap {CONFIG_CAP}")));
    }
    let mut value = 1.0;
    for n in 1..=top {
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        value += sign * order_sum(n);
    }
    let next_term = if top < m { order_sum(top + 1).abs() } else { 0.0 };
    Ok(GapProbability { value, next_term })
}

pub(crate) fn choose(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
