use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_on;
use num_complex::Complex64;
use std::f64::consts::PI;

const RAY_NODES: usize = 48;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Ai(x) and Ai'(x) from the contour integral (1/2πi)∫ e^{t³/3 − xt} dt.
/// For x ≥ 0 the path runs along rays at ±π/3 from the saddle √x; for x < 0
/// it climbs the imaginary axis to the saddle i√|x| and leaves along the
/// steepest-descent direction π/4. The integrand has no cancellation on
/// either path.
pub fn airy_ai_pair(x: f64) -> (f64, f64) {
    let f = |t: Complex64| t * t * t / 3.0 - t * x;
    let mut acc = c(0.0, 0.0);
    let mut accp = c(0.0, 0.0);
    let (start, dir, scale) = if x >= 0.0 {
        let t0 = x.sqrt();
        (c(t0, 0.0), Complex64::from_polar(1.0, PI / 3.0), t0)
    } else {
        let k = (-x).sqrt();
        // vertical segment 0 → iκ, integrand of unit modulus
        let n = (24.0 + 2.0 * k * k * k) as usize;
        let (ys, ws) = gauss_legendre_on(n.min(400), 0.0, k);
        for (y, w) in ys.iter().zip(&ws) {
            let t = c(0.0, *y);
            let e = f(t).exp() * c(0.0, 1.0) * *w;
            acc += e;
            accp -= e * t;
        }
        (c(0.0, k), Complex64::from_polar(1.0, PI / 4.0), k)
    };
    // decay along the ray is at least exp(−scale·r²/2 − r³/(3√2))
    let mut len = 1.0;
    while scale * len * len / 2.0 + len * len * len / (3.0 * std::f64::consts::SQRT_2) < 45.0 {
        len *= 1.25;
    }
    let pieces = 4;
    for p in 0..pieces {
        let (a, b) = (len * p as f64 / pieces as f64, len * (p + 1) as f64 / pieces as f64);
        let (rs, ws) = gauss_legendre_on(RAY_NODES / 2, a, b);
        for (r, w) in rs.iter().zip(&ws) {
            let t = start + dir * *r;
            let e = f(t).exp() * dir * *w;
            acc += e;
            accp -= e * t;
        }
    }
    (acc.im / PI, accp.im / PI)
}

pub fn airy_ai(x: f64) -> f64 {
    airy_ai_pair(x).0
}

pub fn airy_ai_prime(x: f64) -> f64 {
    airy_ai_pair(x).1
}

/// Ai and Ai' by the Maclaurin series, summed in double-double arithmetic so
/// that the cancellation for positive x does not matter up to x ≈ 10.
pub fn airy_series(x: f64) -> (f64, f64) {
    let c1 = Dd::new(0.3550280538878172, 2.05233632436212e-17);
    let c2 = Dd::new(0.2588194037928068, -2.522243111610832e-17);
    let xd = Dd::from(x);
    let x3 = xd * xd * xd;
    // f = Σ a_k, a_0 = 1, a_{k+1} = a_k x³ / ((3k+2)(3k+3))
    // g = Σ b_k, b_0 = x, b_{k+1} = b_k x³ / ((3k+3)(3k+4))
    let (mut f, mut g) = (Dd::from(1.0), xd);
    let (mut fp, mut gp) = (Dd::from(0.0), Dd::from(1.0));
    let (mut a, mut b) = (Dd::from(1.0), xd);
    for k in 0..200 {
        let k3 = 3.0 * k as f64;
        a = a * x3 / Dd::from((k3 + 2.0) * (k3 + 3.0));
        b = b * x3 / Dd::from((k3 + 3.0) * (k3 + 4.0));
        f = f + a;
        g = g + b;
        // derivatives: d/dx x^{3k+3} = (3k+3) x^{3k+2}
        if x != 0.0 {
            fp = fp + a * Dd::from(k3 + 3.0) / xd;
            gp = gp + b * Dd::from(k3 + 4.0) / xd;
        }
        if a.hi.abs() < 1e-40 * f.hi.abs().max(1.0) && b.hi.abs() < 1e-40 * g.hi.abs().max(1.0) {
            break;
        }
    }
    let ai = c1 * f - c2 * g;
    let aip = c1 * fp - c2 * gp;
    (ai.hi + ai.lo, aip.hi + aip.lo)
}

#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl std::ops::Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl std::ops::Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi));
        Dd { hi, lo }
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from(q3)
    }
}

/// K_Ai(x,y) = (Ai(x)Ai'(y) − Ai'(x)Ai(y))/(x − y), diagonal Ai'(x)² − x Ai(x)².
pub fn airy_kernel_closed(x: f64, y: f64) -> f64 {
    let (ax, dx) = airy_ai_pair(x);
    if (x - y).abs() < 1e-7 {
        let m = 0.5 * (x + y);
        let (a, d) = if x == y { (ax, dx) } else { airy_ai_pair(m) };
        // first-order correction in x − y vanishes by symmetry
        return d * d - m * a * a;
    }
    let (ay, dy) = airy_ai_pair(y);
    (ax * dy - dx * ay) / (x - y)
}

/// Airy-kernel matrix for a list of points sharing one set of Ai evaluations.
pub fn airy_kernel_closed_matrix(xs: &[f64]) -> Vec<Vec<f64>> {
    let vals: Vec<(f64, f64)> = xs.iter().map(|&x| airy_ai_pair(x)).collect();
    let n = xs.len();
    let mut k = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (ax, dx) = vals[i];
            let (ay, dy) = vals[j];
            k[i][j] = if (xs[i] - xs[j]).abs() < 1e-7 {
                let m = 0.5 * (xs[i] + xs[j]);
                dx * dx - m * ax * ax
            } else {
                (ax * dy - dx * ay) / (xs[i] - xs[j])
            };
        }
    }
    k
}

/// Result of a contour-quadrature kernel evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AiryValue {
    pub value: f64,
    /// Integrand modulus at the truncation points, a bound on the neglected tails.
    pub tail: f64,
}

/// Airy kernel as the double contour integral
/// (1/(2πi)²) ∫∫ e^{v³/3 − w³/3 − vx + wy} / (v − w) dv dw,
/// v on rays 1 + r e^{±iπ/3}, w on rays −1 + r e^{±2iπ/3}, r ∈ [0, len].
pub fn airy_kernel_contour(x: f64, y: f64, len: f64, nodes: usize) -> Result<AiryValue> {
    if !(len > 0.0) || nodes < 8 {
        return Err(Error::Validation("airy contour needs positive length and at least 8 nodes".into()));
    }
    let (rs, ws) = gauss_legendre_on(nodes, 0.0, len);
    let mut vpts = Vec::with_capacity(2 * nodes);
    let mut wpts = Vec::with_capacity(2 * nodes);
    // both contours run from the lower ray (incoming) to the upper ray (outgoing)
    for (sgn, orient) in [(1.0, 1.0), (-1.0, -1.0)] {
        let dv = Complex64::from_polar(1.0, sgn * PI / 3.0);
        let dw = Complex64::from_polar(1.0, sgn * 2.0 * PI / 3.0);
        for (r, wt) in rs.iter().zip(&ws) {
            let v = c(1.0, 0.0) + dv * *r;
            let w = c(-1.0, 0.0) + dw * *r;
            vpts.push((v, (v * v * v / 3.0 - v * x).exp() * dv * (*wt * orient)));
            wpts.push((w, (-w * w * w / 3.0 + w * y).exp() * dw * (*wt * orient)));
        }
    }
    let mut acc = c(0.0, 0.0);
    for &(v, fv) in &vpts {
        for &(w, fw) in &wpts {
            acc += fv * fw / (v - w);
        }
    }
    let k = acc / (c(0.0, 2.0 * PI) * c(0.0, 2.0 * PI));
    let ve = c(1.0, 0.0) + Complex64::from_polar(len, PI / 3.0);
    let we = c(-1.0, 0.0) + Complex64::from_polar(len, 2.0 * PI / 3.0);
    let tail = (ve * ve * ve / 3.0 - ve * x).exp().norm().max((-we * we * we / 3.0 + we * y).exp().norm());
    if tail > 1e-12 {
        return Err(Error::NonConvergence(format!("airy contour tail {tail:.2e} exceeds 1e-12")));
    }
    Ok(AiryValue { value: k.re, tail })
}

/// Airy kernel by contour quadrature with the default truncation.
pub fn airy_kernel(x: f64, y: f64) -> Result<f64> {
    let len = 4.0 + 0.5 * (x.abs().max(y.abs())).sqrt();
    airy_kernel_contour(x, y, len.max(6.0), 96).map(|v| v.value)
}
