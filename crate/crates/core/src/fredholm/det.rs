use super::rule::QuadratureRule;
use crate::error::{Error, Result};
use crate::linalg::Mat;

fn det_weighted(k: impl Fn(usize, usize) -> f64, w: &[f64]) -> f64 {
    let sw: Vec<f64> = w.iter().map(|w| w.sqrt()).collect();
    Mat::from_fn(sw.len(), |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - sw[i] * k(i, j) * sw[j]
    })
    .det()
}

/// det(I − K) on L²(s, ∞), discretized as det(I − W^{1/2} K W^{1/2}).
pub fn fredholm_det(kernel: &dyn Fn(f64, f64) -> f64, s: f64, rule: &QuadratureRule) -> f64 {
    let (x, w) = rule.on_half_line(s);
    det_weighted(|i, j| kernel(x[i], x[j]), &w)
}

/// Same, with a kernel that fills its whole matrix at once from the nodes.
pub fn fredholm_det_matrix(kernel: &dyn Fn(&[f64]) -> Vec<Vec<f64>>, s: f64, rule: &QuadratureRule) -> f64 {
    let (x, w) = rule.on_half_line(s);
    let k = kernel(&x);
    det_weighted(|i, j| k[i][j], &w)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetValue {
    pub value: f64,
    pub order: usize,
    /// |value − value at half the order|.
    pub change: f64,
}

/// Doubles `rule` until two consecutive determinants differ by at most `tol`.
pub fn fredholm_det_converged(
    kernel: &dyn Fn(&[f64]) -> Vec<Vec<f64>>,
    s: f64,
    rule: &QuadratureRule,
    tol: f64,
    max_order: usize,
) -> Result<DetValue> {
    let mut rule = rule.clone();
    let mut prev = fredholm_det_matrix(kernel, s, &rule);
    while rule.order * 2 <= max_order {
        rule = rule.doubled();
        let cur = fredholm_det_matrix(kernel, s, &rule);
        let change = (cur - prev).abs();
        if change <= tol {
            return Ok(DetValue { value: cur, order: rule.order, change });
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!(
        "Fredholm determinant at s={s} not converged by order {}",
        rule.order
    )))
}
