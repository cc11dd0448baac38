use super::det::{fredholm_det_converged, DetValue};
use super::rule::QuadratureRule;
use crate::error::{invalid, Result};
use crate::kernels::airy_kernel_closed_matrix;

pub const TW2_RANGE: (f64, f64) = (-10.0, 6.0);
const TW2_TOL: f64 = 1e-12;
const TW2_MAX_ORDER: usize = 640;

/// F2(s) = det(I − K_Ai) on L²(s, ∞), with the order that reached agreement.
pub fn tw2_cdf_detail(s: f64) -> Result<DetValue> {
    if !(TW2_RANGE.0..=TW2_RANGE.1).contains(&s) {
        return Err(invalid!("tw2_cdf needs s in [{}, {}], got {s}", TW2_RANGE.0, TW2_RANGE.1));
    }
    let rule = QuadratureRule::new(40)?;
    let mut d = fredholm_det_converged(&airy_kernel_closed_matrix, s, &rule, TW2_TOL, TW2_MAX_ORDER)?;
    d.value = d.value.clamp(0.0, 1.0);
    Ok(d)
}

/// GUE Tracy–Widom distribution function.
pub fn tw2_cdf(s: f64) -> Result<f64> {
    tw2_cdf_detail(s).map(|d| d.value)
}
