use crate::error::{invalid, Result};
use crate::RngStream;
use rand_distr::{Distribution, Gamma};

fn check_dims<T>(w: &[Vec<T>], i: usize, j: usize) -> Result<()> {
    let rows = w.len();
    let cols = w.first().map_or(0, |r| r.len());
    if w.iter().any(|r| r.len() != cols) {
        return Err(invalid!("weight matrix rows have different lengths"));
    }
    if i == 0 || j == 0 || i > rows || j > cols {
        return Err(invalid!("endpoint ({i},{j}) outside the {rows}×{cols} grid"));
    }
    Ok(())
}

/// Table of last-passage times T(i,j) = w_ij + max(T(i−1,j), T(i,j−1)).
pub fn lpp_table(w: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut t = w.to_vec();
    for i in 0..t.len() {
        for j in 0..t[i].len() {
            let up = if i > 0 { t[i - 1][j] } else { f64::NEG_INFINITY };
            let left = if j > 0 { t[i][j - 1] } else { f64::NEG_INFINITY };
            let best = up.max(left);
            if best.is_finite() {
                t[i][j] += best;
            }
        }
    }
    t
}

/// Last-passage time to (i, j), 1-based.
pub fn lpp_time(w: &[Vec<f64>], i: usize, j: usize) -> Result<f64> {
    check_dims(w, i, j)?;
    if w.iter().flatten().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(invalid!("LPP weights must be finite and nonnegative"));
    }
    let sub: Vec<Vec<f64>> = w[..i].iter().map(|r| r[..j].to_vec()).collect();
    Ok(lpp_table(&sub)[i - 1][j - 1])
}

fn check_polymer(d: &[Vec<f64>], t: usize, x: usize) -> Result<()> {
    check_dims(d, t, x)?;
    if d.iter().flatten().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(invalid!("polymer weights must be finite and positive"));
    }
    Ok(())
}

/// ln Z(T, x) via the same recursion in log space.
pub fn polymer_log_partition(d: &[Vec<f64>], t: usize, x: usize) -> Result<f64> {
    check_polymer(d, t, x)?;
    let mut z = vec![vec![f64::NEG_INFINITY; x]; t];
    for i in 0..t {
        for j in 0..x {
            let ld = d[i][j].ln();
            z[i][j] = if i == 0 && j == 0 {
                ld
            } else {
                let a = if i > 0 { z[i - 1][j] } else { f64::NEG_INFINITY };
                let b = if j > 0 { z[i][j - 1] } else { f64::NEG_INFINITY };
                let m = a.max(b);
                ld + m + ((a - m).exp() + (b - m).exp()).ln()
            };
        }
    }
    Ok(z[t - 1][x - 1])
}

/// Z(T, x) = Σ over up-right paths from (1,1) of ∏ d, by Z = d·(Z_up + Z_left).
/// Falls back to the log-space recursion when the direct one overflows.
pub fn polymer_partition(d: &[Vec<f64>], t: usize, x: usize) -> Result<f64> {
    check_polymer(d, t, x)?;
    let mut z = vec![vec![0.0; x]; t];
    for i in 0..t {
        for j in 0..x {
            let prev = if i == 0 && j == 0 {
                1.0
            } else {
                (if i > 0 { z[i - 1][j] } else { 0.0 }) + (if j > 0 { z[i][j - 1] } else { 0.0 })
            };
            z[i][j] = d[i][j] * prev;
        }
    }
    let v = z[t - 1][x - 1];
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        polymer_log_partition(d, t, x).map(f64::exp)
    }
}

/// Weights d = 1/G with G ~ Gamma(θ, 1): the log-gamma polymer environment.
pub fn log_gamma_weights(rows: usize, cols: usize, theta: f64, rng: &mut RngStream) -> Result<Vec<Vec<f64>>> {
    let g = Gamma::new(theta, 1.0).map_err(|e| invalid!("gamma shape {theta}: {e}"))?;
    Ok((0..rows).map(|_| (0..cols).map(|_| 1.0 / g.sample(rng)).collect()).collect())
}
