use super::gamma::gamma_reflection_pair;
use crate::error::{invalid, Error, Result};
use crate::linalg::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Product cut-off for (a;q)_∞.
pub const POCHHAMMER_EPS: f64 = 1e-18;
/// Largest tail of the truncated line integral that is accepted.
pub const MAX_TAIL: f64 = 1e-10;
const MAX_HEIGHT: f64 = 400.0;
const MAX_LINE_NODES: usize = 200_000;

/// (a;q)_∞ = ∏_{i≥0} (1 − a qⁱ).
pub fn q_pochhammer_inf(a: Complex64, q: f64) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    let mut x = a;
    while x.norm() >= POCHHAMMER_EPS {
        p *= 1.0 - x;
        x *= q;
    }
    p
}

pub fn q_pochhammer_inf_real(a: f64, q: f64) -> f64 {
    q_pochhammer_inf(Complex64::new(a, 0.0), q).re
}

/// Inputs of the ζ-kernel determinant. `height` and `line_nodes` of `None`
/// are chosen from ζ, q and the circle radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaKernelSpec {
    pub zeta: Complex64,
    pub q: f64,
    pub tau: f64,
    pub n: usize,
    pub height: Option<f64>,
    pub line_nodes: Option<usize>,
    pub circle_nodes: usize,
    pub radius: Option<f64>,
}

impl ZetaKernelSpec {
    pub fn new(zeta: Complex64, q: f64, tau: f64, n: usize) -> Self {
        ZetaKernelSpec { zeta, q, tau, n, height: None, line_nodes: None, circle_nodes: 48, radius: None }
    }

    /// Circle radius around 1: min(1−q, 1/2)·0.4, shrunk if needed so that
    /// q^s w never meets the circle while Re s = 1/2.
    pub fn circle_radius(&self) -> f64 {
        if let Some(r) = self.radius {
            return r;
        }
        let sq = self.q.sqrt();
        ((1.0 - self.q).min(0.5) * 0.4).min(0.5 * (1.0 - sq) / (1.0 + sq))
    }

    fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(invalid!("q must lie in (0,1), got {}", self.q));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(invalid!("tau must be finite and ≥ 0, got {}", self.tau));
        }
        if self.n == 0 {
            return Err(invalid!("N must be positive"));
        }
        if !(self.zeta.re.is_finite() && self.zeta.im.is_finite()) {
            return Err(invalid!("zeta must be finite"));
        }
        if self.zeta.im == 0.0 && self.zeta.re > 0.0 {
            return Err(invalid!("zeta = {} lies on the cut [0, ∞)", self.zeta.re));
        }
        if self.circle_nodes < 8 {
            return Err(invalid!("circle needs at least 8 nodes"));
        }
        let r = self.circle_radius();
        let sq = self.q.sqrt();
        if !(r > 0.0 && r < 1.0 && 1.0 + r < 1.0 / self.q && sq * (1.0 + r) < 1.0 - r) {
            return Err(invalid!("circle radius {r} does not separate the poles"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QLaplaceValue {
    pub value: Complex64,
    /// Bound on the part of the line integral beyond the truncation height.
    pub tail_bound: f64,
    /// |value − value with half the circle nodes|.
    pub circle_change: f64,
    pub height: f64,
    pub line_nodes: usize,
}

struct Line {
    s: Vec<Complex64>,
    qs: Vec<Complex64>,
    /// h/(2π) · Γ(−s)Γ(1+s)(−ζ)^s
    phi: Vec<Complex64>,
    tail_density: f64,
    height: f64,
}

fn line(spec: &ZetaKernelSpec) -> Result<Line> {
    let r = spec.circle_radius();
    let lnq = spec.q.ln();
    // Distance from Re s = 1/2 to the nearest singularity in Re s.
    let ratio = (1.0 - r) / (1.0 + r);
    let s_pole = ratio.ln() / lnq;
    let delta = (0.5 - s_pole).min(0.5);
    let log_mz = (-spec.zeta).ln();
    let decay = PI - log_mz.im.abs();
    let height = spec.height.unwrap_or_else(|| 40.0 / decay);
    if height > MAX_HEIGHT {
        return Err(Error::Budget(format!("line height {height:.1} needed for arg(−ζ) = {}", log_mz.im)));
    }
    let h_default = 2.0 * PI * delta / 38.0;
    let nodes = spec.line_nodes.unwrap_or_else(|| 2 * (height / h_default).ceil() as usize + 1);
    if nodes > MAX_LINE_NODES {
        return Err(Error::Budget(format!("{nodes} line nodes exceed {MAX_LINE_NODES}")));
    }
    let nodes = nodes.max(3) | 1;
    let h = 2.0 * height / (nodes - 1) as f64;
    let mut out = Line { s: vec![], qs: vec![], phi: vec![], tail_density: 0.0, height };
    for k in 0..nodes {
        let y = -height + k as f64 * h;
        let s = Complex64::new(0.5, y);
        out.qs.push((s * lnq).exp());
        out.phi.push(h / (2.0 * PI) * gamma_reflection_pair(s) * (s * log_mz).exp());
        out.s.push(s);
    }
    // ∫_Y^∞ π/cosh(πy) |ζ|^{1/2} e^{|arg| y} dy on both sides, divided by 2π.
    out.tail_density = spec.zeta.norm().sqrt() * 2.0 * (-decay * height).exp() / decay;
    Ok(out)
}

fn determinant(spec: &ZetaKernelSpec, ln: &Line, m: usize) -> (Complex64, f64) {
    let r = spec.circle_radius();
    let n = spec.n as i32;
    let (w, dw): (Vec<Complex64>, Vec<Complex64>) = (0..m)
        .map(|a| {
            let e = Complex64::from_polar(r, 2.0 * PI * a as f64 / m as f64);
            (1.0 + e, e / m as f64)
        })
        .unzip();
    let den: Vec<Complex64> = w.iter().map(|&wa| q_pochhammer_inf(wa, spec.q)).collect();
    let mut gmax: f64 = 0.0;
    let mut kmat = vec![Complex64::new(0.0, 0.0); m * m];
    for (k, &qs) in ln.qs.iter().enumerate() {
        for a in 0..m {
            let ratio = q_pochhammer_inf(qs * w[a], spec.q) / den[a];
            let f = ratio.powi(n) * (spec.tau * w[a] * (qs - 1.0)).exp();
            let base = ln.phi[k] * f;
            for b in 0..m {
                let g = 1.0 / (qs * w[a] - w[b]);
                kmat[a * m + b] += base * g;
                if k == 0 || k + 1 == ln.qs.len() {
                    gmax = gmax.max((f * g).norm());
                }
            }
        }
    }
    let mat = Mat::from_fn(m, |a, b| {
        let id = if a == b { 1.0 } else { 0.0 };
        Complex64::new(id, 0.0) + kmat[a * m + b] * dw[b]
    });
    // Line tail times the circle measure |dw/2πi| summed over the circle.
    let tail = ln.tail_density * gmax * r;
    (mat.det(), tail)
}

/// det(I + K_ζ) on L²(C) for the circle C around 1, with diagnostics.
pub fn q_laplace_det_detail(spec: &ZetaKernelSpec) -> Result<QLaplaceValue> {
    spec.validate()?;
    if spec.zeta == Complex64::new(0.0, 0.0) {
        return Ok(QLaplaceValue {
            value: Complex64::new(1.0, 0.0),
            tail_bound: 0.0,
            circle_change: 0.0,
            height: 0.0,
            line_nodes: 0,
        });
    }
    let ln = line(spec)?;
    let m = spec.circle_nodes;
    let (coarse, _) = determinant(spec, &ln, m / 2);
    let (value, tail) = determinant(spec, &ln, m);
    if tail > MAX_TAIL {
        return Err(Error::NonConvergence(format!("line tail bound {tail:e} exceeds {MAX_TAIL:e}")));
    }
    Ok(QLaplaceValue {
        value,
        tail_bound: tail,
        circle_change: (value - coarse).norm(),
        height: ln.height,
        line_nodes: ln.s.len(),
    })
}

/// E[1/(ζ q^{λ_N}; q)_∞] under the q-Whittaker measure, as det(I + K_ζ).
pub fn q_laplace_det(spec: &ZetaKernelSpec) -> Result<Complex64> {
    q_laplace_det_detail(spec).map(|v| v.value)
}
