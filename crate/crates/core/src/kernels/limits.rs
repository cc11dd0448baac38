use super::airy::airy_kernel;
use super::lattice::SeriesKernel;
use crate::error::{invalid, Result};
use std::f64::consts::PI;

/// Discrete sine kernel sin(φ(x−y))/(π(x−y)), diagonal φ/π.
pub fn sine_kernel(phi: f64, x: i64, y: i64) -> f64 {
    if x == y {
        phi / PI
    } else {
        let d = (x - y) as f64;
        (phi * d).sin() / (PI * d)
    }
}

/// sup_{|x|,|y| ≤ r} |K_θ(⌊uθ⌋+x, ⌊uθ⌋+y) − sine(arccos(u/2), x, y)|, with the
/// lattice point ⌊uθ⌋+x read as the half-integer site ⌊uθ⌋+x+1/2.
pub fn bulk_deviation(theta: f64, u: f64, r: i64) -> Result<f64> {
    if theta < 10.0 {
        return Err(invalid!("bulk limit needs theta ≥ 10, got {theta}"));
    }
    if !(u > -2.0 && u < 2.0) {
        return Err(invalid!("u must lie in (-2, 2)"));
    }
    let k = SeriesKernel::plancherel(theta)?;
    let base = (u * theta).floor() as i64;
    let phi = (u / 2.0).acos();
    let mut dev: f64 = 0.0;
    for x in -r..=r {
        for y in -r..=r {
            dev = dev.max((k.get(base + x, base + y) - sine_kernel(phi, x, y)).abs());
        }
    }
    Ok(dev)
}

/// Half-integer site nearest to 2θ + xθ^{1/3}, as the stored integer.
pub fn edge_site(theta: f64, x: f64) -> i64 {
    (2.0 * theta + x * theta.cbrt() - 0.5).round() as i64
}

/// sup over pts of |θ^{1/3} K_θ(site(x), site(y)) − K_Airy(x, y)|.
pub fn edge_deviation(theta: f64, pts: &[(f64, f64)]) -> Result<f64> {
    if theta < 100.0 {
        return Err(invalid!("edge limit needs theta ≥ 100, got {theta}"));
    }
    let k = SeriesKernel::plancherel(theta)?;
    let s = theta.cbrt();
    let mut dev: f64 = 0.0;
    for &(x, y) in pts {
        let lattice = s * k.get(edge_site(theta, x), edge_site(theta, y));
        dev = dev.max((lattice - airy_kernel(x, y)?).abs());
    }
    Ok(dev)
}
