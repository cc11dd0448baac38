//! Fredholm determinants on L²(s, ∞) and on a circle, Tracy–Widom F2 and
//! the Painlevé II check on it.

mod det;
mod gamma;
mod painleve;
mod qlaplace;
mod rule;
mod tracy_widom;

pub use det::{fredholm_det, fredholm_det_converged, fredholm_det_matrix, DetValue};
pub use gamma::{gamma_complex, gamma_reflection_pair};
pub use painleve::{airy_boundary, painleve2_f2, painleve2_solve, PainleveValue, PAINLEVE_S0};
pub use qlaplace::{
    q_laplace_det, q_laplace_det_detail, q_pochhammer_inf, q_pochhammer_inf_real, QLaplaceValue, ZetaKernelSpec,
    MAX_TAIL, POCHHAMMER_EPS,
};
pub use rule::{HalfLineMap, QuadratureRule, MIN_ORDER};
pub use tracy_widom::{tw2_cdf, tw2_cdf_detail, TW2_RANGE};
