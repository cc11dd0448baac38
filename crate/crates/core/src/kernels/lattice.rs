use crate::detcore::{KernelMatrix, StateSpace};
use crate::error::{invalid, Error, Result};
use crate::symcore::Specialization;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Half-integer sites are stored as integers: `m` stands for m + 1/2.
pub fn site_value(m: i64) -> f64 {
    m as f64 + 0.5
}

/// Trapezoidal circle |z − center| = radius with `nodes` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSpec {
    pub center: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

impl ContourSpec {
    pub fn circle(radius: f64, nodes: usize) -> Self {
        ContourSpec { center: Complex64::new(0.0, 0.0), radius, nodes }
    }

    fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(invalid!("contour radius must be positive"));
        }
        if self.nodes < 64 {
            return Err(invalid!("contour needs at least 64 nodes, got {}", self.nodes));
        }
        Ok(())
    }
}

/// The w-circle (inner, |w| = R1) and v-circle (outer, |v| = R2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourPair {
    pub inner: ContourSpec,
    pub outer: ContourSpec,
}

pub const PLANCHEREL_INNER: f64 = 0.66;
pub const PLANCHEREL_OUTER: f64 = 1.5;
const MAX_NODES: usize = 1 << 13;

impl ContourPair {
    pub fn new(r1: f64, r2: f64, nodes: usize) -> Self {
        ContourPair { inner: ContourSpec::circle(r1, nodes), outer: ContourSpec::circle(r2, nodes) }
    }

    /// Radii 0.66 < 1.5 when admissible, otherwise r^{2/3} < r^{−2/3} with r
    /// the growth radius of the specializations.
    pub fn default_for(r1: &Specialization, r2: &Specialization) -> Result<Self> {
        let r = r1.growth_radius().max(r2.growth_radius());
        if r >= 1.0 {
            return Err(invalid!("no admissible contours: growth radius {r} ≥ 1"));
        }
        if r < PLANCHEREL_INNER {
            return Ok(Self::new(PLANCHEREL_INNER, PLANCHEREL_OUTER, 64));
        }
        Ok(Self::new(r.powf(2.0 / 3.0), r.powf(-2.0 / 3.0), 64))
    }

    /// Circles around the origin with r < R1 < R2 < 1/r.
    pub fn check(&self, r1: &Specialization, r2: &Specialization) -> Result<()> {
        self.inner.validate()?;
        self.outer.validate()?;
        if self.inner.center.norm() != 0.0 || self.outer.center.norm() != 0.0 {
            return Err(invalid!("kernel contours must be centred at the origin"));
        }
        let r = r1.growth_radius().max(r2.growth_radius());
        let (a, b) = (self.inner.radius, self.outer.radius);
        if !(r < a && a < b && b * r < 1.0) {
            return Err(invalid!("contour radii {a}, {b} violate r < R1 < R2 < 1/r with r = {r}"));
        }
        Ok(())
    }
}

/// Kernel values on a window with quadrature diagnostics.
#[derive(Clone, Debug)]
pub struct KernelWindow {
    pub sites: Vec<i64>,
    pub values: Vec<Vec<f64>>,
    /// Largest |Im K| seen before it was discarded.
    pub max_imag: f64,
    /// Largest change at the final node doubling.
    pub doubling_change: f64,
    pub nodes: usize,
}

impl KernelWindow {
    pub fn get(&self, a: i64, b: i64) -> Option<f64> {
        let i = self.sites.iter().position(|&s| s == a)?;
        let j = self.sites.iter().position(|&s| s == b)?;
        Some(self.values[i][j])
    }

    pub fn to_kernel_matrix(&self) -> KernelMatrix {
        let n = self.sites.len();
        let m = crate::linalg::Mat::from_fn(n, |i, j| self.values[i][j]);
        KernelMatrix::new(self.sites.iter().map(|&s| site_value(s)).collect(), StateSpace::HalfInteger, m)
            .expect("finite kernel")
    }
}

type LogFactor<'a> = Box<dyn Fn(Complex64) -> Complex64 + 'a>;

fn double_contour_once(
    f1: &LogFactor,
    f2: &LogFactor,
    sites: &[i64],
    r1: f64,
    r2: f64,
    n: usize,
) -> Vec<Vec<Complex64>> {
    let s = sites.len();
    let vs: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(r2, 2.0 * PI * (k as f64 + 0.5) / n as f64)).collect();
    let ws: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(r1, 2.0 * PI * k as f64 / n as f64)).collect();
    let lv: Vec<Complex64> = vs.iter().map(|v| f1(*v)).collect();
    let lw: Vec<Complex64> = ws.iter().map(|w| f2(*w)).collect();
    // B[l][b] = F2(w_l) w_l^{b+1} / n
    let b: Vec<Vec<Complex64>> = (0..n)
        .map(|l| sites.iter().map(|&m| (lw[l] + ws[l].ln() * (m + 1) as f64).exp() / n as f64).collect())
        .collect();
    // M[k][b] = Σ_l B[l][b] / (v_k − w_l)
    let mut out = vec![vec![Complex64::new(0.0, 0.0); s]; s];
    for k in 0..n {
        let mut mk = vec![Complex64::new(0.0, 0.0); s];
        for l in 0..n {
            let c = (vs[k] - ws[l]).inv();
            for (acc, bv) in mk.iter_mut().zip(&b[l]) {
                *acc += c * bv;
            }
        }
        let lnv = vs[k].ln();
        for (ia, &a) in sites.iter().enumerate() {
            let ak = (lv[k] - lnv * a as f64).exp() / n as f64;
            for ib in 0..s {
                out[ia][ib] += ak * mk[ib];
            }
        }
    }
    out
}

fn auto_double(f1: LogFactor, f2: LogFactor, sites: &[i64], pair: &ContourPair, tol: f64) -> Result<KernelWindow> {
    let mut n = pair.inner.nodes.max(pair.outer.nodes);
    let mut prev = double_contour_once(&f1, &f2, sites, pair.inner.radius, pair.outer.radius, n);
    loop {
        n *= 2;
        let cur = double_contour_once(&f1, &f2, sites, pair.inner.radius, pair.outer.radius, n);
        let change = cur
            .iter()
            .flatten()
            .zip(prev.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if change <= tol {
            let max_imag = cur.iter().flatten().map(|z| z.im.abs()).fold(0.0, f64::max);
            let values = cur.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
            return Ok(KernelWindow { sites: sites.to_vec(), values, max_imag, doubling_change: change, nodes: n });
        }
        if n >= MAX_NODES {
            return Err(Error::NonConvergence(format!(
                "kernel quadrature changed by {change:.2e} at {n} nodes (tolerance {tol:.1e})"
            )));
        }
        prev = cur;
    }
}

/// Schur-measure kernel K(i,j) on a window of half-integer sites by the double
/// contour integral, nodes doubled until successive values agree to `tol`.
pub fn schur_kernel_window(
    r1: &Specialization,
    r2: &Specialization,
    sites: &[i64],
    pair: &ContourPair,
    tol: f64,
) -> Result<KernelWindow> {
    pair.check(r1, r2)?;
    let (a1, a2) = (r1.clone(), r2.clone());
    let (b1, b2) = (r1.clone(), r2.clone());
    let f1: LogFactor = Box::new(move |v| a1.log_h_gen(v) - a2.log_h_gen(v.inv()));
    let f2: LogFactor = Box::new(move |w| b2.log_h_gen(w.inv()) - b1.log_h_gen(w));
    auto_double(f1, f2, sites, pair, tol)
}

/// Single kernel value; see [`schur_kernel_window`].
pub fn schur_kernel(r1: &Specialization, r2: &Specialization, i: i64, j: i64, pair: &ContourPair) -> Result<f64> {
    let w = schur_kernel_window(r1, r2, &[i, j], pair, 1e-12)?;
    Ok(w.get(i, j).unwrap())
}

/// Plancherel kernel by the double contour with the integrand
/// exp(θ(v − 1/v − w + 1/w)), symmetrized.
pub fn plancherel_kernel_contour(theta: f64, sites: &[i64], pair: &ContourPair, tol: f64) -> Result<KernelWindow> {
    if !(theta > 0.0) {
        return Err(invalid!("theta must be positive"));
    }
    pair.inner.validate()?;
    pair.outer.validate()?;
    if pair.inner.radius >= pair.outer.radius {
        return Err(invalid!("need |w| < |v|"));
    }
    let f1: LogFactor = Box::new(move |v| (v - v.inv()) * theta);
    let f2: LogFactor = Box::new(move |w| (w.inv() - w) * theta);
    let mut w = auto_double(f1, f2, sites, pair, tol)?;
    let n = sites.len();
    for i in 0..n {
        for j in i + 1..n {
            let s = 0.5 * (w.values[i][j] + w.values[j][i]);
            w.values[i][j] = s;
            w.values[j][i] = s;
        }
    }
    Ok(w)
}

/// Laurent coefficients of exp(logf) on the circle |z| = radius:
/// returns (offset, coeffs) with coeffs[k] the coefficient of z^{k − offset}.
fn laurent(logf: &dyn Fn(Complex64) -> Complex64, radius: f64, n: usize) -> (i64, Vec<f64>) {
    let mut buf: Vec<Complex64> =
        (0..n).map(|k| logf(Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64)).exp()).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = (n / 2) as i64;
    let coeffs = (-half..half)
        .map(|m| {
            let idx = m.rem_euclid(n as i64) as usize;
            buf[idx].re / n as f64 * radius.powi(-(m as i32))
        })
        .collect();
    (half, coeffs)
}

/// Kernel through its coefficient series K(a,b) = Σ_{s≥0} c1_{a+1+s} c2_{b+1+s},
/// where c1_n = [v^n] H(ρ1;v)/H(ρ2;1/v) and c2_m = [w^{−m}] H(ρ2;1/w)/H(ρ1;w).
/// The coefficients come from an FFT on the unit circle.
#[derive(Clone, Debug)]
pub struct SeriesKernel {
    offset: i64,
    c1: Vec<f64>,
    c2: Vec<f64>,
}

impl SeriesKernel {
    pub fn schur(r1: &Specialization, r2: &Specialization) -> Result<Self> {
        let r = r1.growth_radius().max(r2.growth_radius());
        if r >= 1.0 {
            return Err(invalid!("coefficient series needs growth radius below 1, got {r}"));
        }
        let g = r1.gamma() + r2.gamma();
        let geo = if r > 0.0 { 80.0 / (1.0 / r).ln() } else { 0.0 };
        let need = 1.2 * g + 40.0 * g.cbrt() + geo + 128.0;
        let n = (2.0 * need).max(256.0) as usize;
        let n = n.next_power_of_two();
        let f1 = |v: Complex64| r1.log_h_gen(v) - r2.log_h_gen(v.inv());
        let f2 = |u: Complex64| r2.log_h_gen(u) - r1.log_h_gen(u.inv());
        let (offset, c1) = laurent(&f1, 1.0, n);
        // c2_m = [w^{−m}] F2(w) = [u^m] F2(1/u)
        let (_, c2) = laurent(&f2, 1.0, n);
        Ok(SeriesKernel { offset, c1, c2 })
    }

    /// Plancherel: c1_n = c2_n = J_n(2θ).
    pub fn plancherel(theta: f64) -> Result<Self> {
        if !(theta > 0.0) {
            return Err(invalid!("theta must be positive"));
        }
        Self::schur(&Specialization::pure_gamma(theta)?, &Specialization::pure_gamma(theta)?)
    }

    /// c1_n (for Plancherel, J_n(2θ)).
    pub fn c1(&self, n: i64) -> f64 {
        let k = n + self.offset;
        if k < 0 || k as usize >= self.c1.len() {
            0.0
        } else {
            self.c1[k as usize]
        }
    }

    pub fn c2(&self, n: i64) -> f64 {
        let k = n + self.offset;
        if k < 0 || k as usize >= self.c2.len() {
            0.0
        } else {
            self.c2[k as usize]
        }
    }

    pub fn get(&self, a: i64, b: i64) -> f64 {
        let top = self.offset;
        let mut s = 0;
        let mut acc = 0.0;
        while a + 1 + s < top && b + 1 + s < top {
            acc += self.c1(a + 1 + s) * self.c2(b + 1 + s);
            s += 1;
        }
        acc
    }

    pub fn window(&self, sites: &[i64]) -> KernelWindow {
        let values = sites.iter().map(|&a| sites.iter().map(|&b| self.get(a, b)).collect()).collect();
        KernelWindow { sites: sites.to_vec(), values, max_imag: 0.0, doubling_change: 0.0, nodes: self.c1.len() }
    }
}

/// Plancherel kernel K_θ(a+1/2, b+1/2). Small θ uses the double contour with
/// the default circles; larger θ (where that integrand cancels catastrophically)
/// uses the coefficient series.
pub fn plancherel_kernel(theta: f64, a: i64, b: i64) -> Result<f64> {
    if theta <= 4.0 {
        let pair = ContourPair::new(PLANCHEREL_INNER, PLANCHEREL_OUTER, 64);
        let w = plancherel_kernel_contour(theta, &[a, b], &pair, 1e-12)?;
        Ok(w.get(a, b).unwrap())
    } else {
        Ok(SeriesKernel::plancherel(theta)?.get(a, b))
    }
}
