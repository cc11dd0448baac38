use crate::error::{invalid, Result};
use crate::RngStream;
use rand::Rng;

/// Ballistic deposition on a ring: a block dropped on column x sticks at
/// height max(h(x−1), h(x)+1, h(x+1)).
pub fn ballistic_deposition(width: usize, steps: u64, rng: &mut RngStream) -> Result<Vec<u64>> {
    if width == 0 {
        return Err(invalid!("width must be positive"));
    }
    let mut h = vec![0u64; width];
    for _ in 0..steps {
        let x = rng.random_range(0..width);
        let l = h[(x + width - 1) % width];
        let r = h[(x + 1) % width];
        h[x] = (h[x] + 1).max(l).max(r);
    }
    Ok(h)
}

/// Standard deviation of the profile around its mean.
pub fn roughness(h: &[u64]) -> f64 {
    let n = h.len() as f64;
    let mean = h.iter().map(|&v| v as f64).sum::<f64>() / n;
    (h.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Growth exponent β from W(t) ~ t^β: least-squares slope of ln W against
/// ln t at sweeps (t = width·2^k drops) before saturation. Reported only.
pub fn growth_exponent(width: usize, sweeps: &[u64], rng: &mut RngStream) -> Result<f64> {
    if sweeps.len() < 2 {
        return Err(invalid!("need at least two sweep counts"));
    }
    let mut pts = Vec::new();
    let mut h = vec![0u64; width];
    let mut done = 0u64;
    for &s in sweeps {
        let drops = s * width as u64;
        for _ in done..drops {
            let x = rng.random_range(0..width);
            let l = h[(x + width - 1) % width];
            let r = h[(x + 1) % width];
            h[x] = (h[x] + 1).max(l).max(r);
        }
        done = drops.max(done);
        pts.push(((s as f64).ln(), roughness(&h).ln()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
