use super::params::QTParams;
use crate::error::{invalid, Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const DEFAULT_GROWTH: f64 = 0.1;
/// When the default radii are rescaled, 1 − r_j = RESCALE·q·(1 − r_{j+1}).
const RESCALE: f64 = 0.5;
const MIN_NODES: usize = 16;
const MAX_EVALUATIONS: f64 = 1e9;
const TOL: f64 = 1e-10;

/// Circles |z − 1| = r_j, r_1 > … > r_k, with `nodes[j]` trapezoid nodes on circle j.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestedContourSpec {
    pub radii: Vec<f64>,
    pub nodes: Vec<usize>,
}

impl NestedContourSpec {
    /// r_j = ((1−q)/2)(1.1)^{k−j}; when these fail the containment check,
    /// r_k is kept and 1 − r_j shrinks by a factor q/2 per level outward.
    pub fn default_for(k: usize, q: f64) -> Self {
        let base = (1.0 - q) / 2.0;
        let radii: Vec<f64> = (1..=k).map(|j| base * (1.0 + DEFAULT_GROWTH).powi((k - j) as i32)).collect();
        let spec = Self::with_radii(radii, q);
        if spec.check(q).is_ok() {
            return spec;
        }
        let mut gap = 1.0 - base;
        let mut radii = vec![0.0; k];
        for j in (0..k).rev() {
            radii[j] = 1.0 - gap;
            gap *= RESCALE * q;
        }
        Self::with_radii(radii, q)
    }

    /// Node counts sized so that the trapezoid error on each circle,
    /// ρ^n with ρ the ratio of its radius to the nearest singularity, is
    /// about e^{−28}.
    pub fn with_radii(radii: Vec<f64>, q: f64) -> Self {
        let k = radii.len();
        let nodes = (0..k)
            .map(|j| {
                let r = radii[j];
                let mut rho: f64 = r;
                for b in j + 1..k {
                    rho = rho.max((1.0 - q + q * radii[b]) / r);
                }
                for a in 0..j {
                    rho = rho.max(q * r / (radii[a] - 1.0 + q));
                }
                if !(rho > 0.0 && rho < 1.0) {
                    return MIN_NODES;
                }
                ((-28.0 / rho.ln()).ceil() as usize).max(MIN_NODES)
            })
            .collect();
        NestedContourSpec { radii, nodes }
    }

    /// Each z_j contour must enclose 1 and q·z_B for every sampled z_B on the
    /// inner contours B > j, and must leave 0 outside.
    pub fn check(&self, q: f64) -> Result<()> {
        let k = self.radii.len();
        if k == 0 || self.nodes.len() != k || self.nodes.iter().any(|&n| n < 4) {
            return Err(invalid!("need one node count of at least four per contour"));
        }
        for (j, &r) in self.radii.iter().enumerate() {
            if !(r > 0.0 && r < 1.0) {
                return Err(invalid!("radius r_{} = {r} must lie in (0, 1) to exclude 0", j + 1));
            }
        }
        for a in 0..k {
            for b in a + 1..k {
                for m in 0..self.nodes[b] {
                    let z = node(self.radii[b], m, self.nodes[b]);
                    if (q * z - 1.0).norm() >= self.radii[a] {
                        return Err(invalid!("contour {} does not enclose q·z_{}", a + 1, b + 1));
                    }
                }
            }
        }
        Ok(())
    }
}

fn node(r: f64, m: usize, n: usize) -> Complex64 {
    1.0 + Complex64::from_polar(r, 2.0 * PI * (m as f64 + 0.5) / n as f64)
}

fn nested_sum(nvars: usize, q: f64, tau: f64, spec: &NestedContourSpec) -> Complex64 {
    // per-contour nodes and single-variable factors, including dz/(2πi) = (z−1)/n
    let z: Vec<Vec<Complex64>> =
        spec.radii.iter().zip(&spec.nodes).map(|(&r, &n)| (0..n).map(|m| node(r, m, n)).collect()).collect();
    let g: Vec<Vec<Complex64>> = z
        .iter()
        .map(|zs| {
            let n = zs.len() as f64;
            zs.iter().map(|&w| ((q - 1.0) * tau * w).exp() / (1.0 - w).powi(nvars as i32) / w * (w - 1.0) / n).collect()
        })
        .collect();
    fn rec(j: usize, idx: &mut Vec<usize>, acc: Complex64, z: &[Vec<Complex64>], g: &[Vec<Complex64>], q: f64) -> Complex64 {
        if j == z.len() {
            return acc;
        }
        let mut s = Complex64::new(0.0, 0.0);
        for m in 0..z[j].len() {
            let w = z[j][m];
            let mut f = acc * g[j][m];
            for (a, &i) in idx.iter().enumerate() {
                let za = z[a][i];
                f *= (za - w) / (za - q * w);
            }
            idx.push(m);
            s += rec(j + 1, idx, f, z, g, q);
            idx.pop();
        }
        s
    }
    rec(0, &mut Vec::new(), Complex64::new(1.0, 0.0), &z, &g, q)
}

/// E[q^{kλ_N}] under the q-Whittaker measure with parameter τ, from the
/// k-fold nested contour integral. Node counts double until the value
/// settles to 1e-10.
pub fn q_moment(k: usize, nvars: usize, params: &QTParams, tau: f64) -> Result<f64> {
    q_moment_with(k, nvars, params, tau, &NestedContourSpec::default_for(k, params.q()))
}

pub fn q_moment_with(k: usize, nvars: usize, params: &QTParams, tau: f64, contours: &NestedContourSpec) -> Result<f64> {
    if !params.is_whittaker() {
        return Err(invalid!("q-moments are defined for t = 0"));
    }
    if k == 0 || nvars == 0 || !(tau >= 0.0) {
        return Err(invalid!("need k ≥ 1, N ≥ 1 and τ ≥ 0"));
    }
    if contours.radii.len() != k {
        return Err(invalid!("{} contours given for k = {k}", contours.radii.len()));
    }
    let q = params.q();
    contours.check(q)?;
    let pre = if k % 2 == 1 { -1.0 } else { 1.0 } * q.powi((k * (k - 1) / 2) as i32);
    let mut spec = contours.clone();
    let mut prev = pre * nested_sum(nvars, q, tau, &spec);
    loop {
        spec.nodes.iter_mut().for_each(|n| *n *= 2);
        if spec.nodes.iter().map(|&n| n as f64).product::<f64>() > MAX_EVALUATIONS {
            return Err(Error::NonConvergence(format!("nested integral unsettled at nodes {:?}", spec.nodes)));
        }
        spec.check(q)?;
        let cur = pre * nested_sum(nvars, q, tau, &spec);
        if (cur - prev).norm() < TOL {
            if cur.im.abs() > 1e-9 {
                return Err(Error::NonConvergence(format!("imaginary residue {}", cur.im)));
            }
            return Ok(cur.re);
        }
        prev = cur;
    }
}
