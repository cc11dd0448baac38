use crate::error::{invalid, Error, Result};
use crate::kernels::airy_ai_pair;

/// Default start of the backward integration.
pub const PAINLEVE_S0: f64 = 8.0;

/// Hastings–McLeod solution at one point together with ln F2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PainleveValue {
    pub y: f64,
    pub dy: f64,
    /// ∫_s^∞ y(t)² dt
    pub q: f64,
    /// ∫_s^∞ (t − s) y(t)² dt, so that F2(s) = exp(−l).
    pub l: f64,
}

impl PainleveValue {
    pub fn f2(&self) -> f64 {
        (-self.l).exp()
    }
}

type State = [f64; 4];

fn rhs(s: f64, u: &State) -> State {
    let (y, dy, q) = (u[0], u[1], u[2]);
    [dy, s * y + 2.0 * y * y * y, -y * y, -q]
}

/// Airy data at s, where y is indistinguishable from Ai.
pub fn airy_boundary(s: f64) -> PainleveValue {
    let (ai, aip) = airy_ai_pair(s);
    PainleveValue {
        y: ai,
        dy: aip,
        q: aip * aip - s * ai * ai,
        l: (2.0 * s * s * ai * ai - 2.0 * s * aip * aip - ai * aip) / 3.0,
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const RTOL: f64 = 1e-13;
const ATOL: f64 = 1e-20;
const MAX_STEPS: usize = 200_000;

/// Integrates Painlevé II backward from `s0` down to `s`.
pub fn painleve2_solve(s: f64, s0: f64) -> Result<PainleveValue> {
    if s0 < PAINLEVE_S0 {
        return Err(invalid!("integration must start at s0 ≥ {PAINLEVE_S0}, got {s0}"));
    }
    if !s.is_finite() {
        return Err(invalid!("s must be finite"));
    }
    if s >= s0 {
        return Ok(airy_boundary(s));
    }
    let b = airy_boundary(s0);
    let mut u: State = [b.y, b.dy, b.q, b.l];
    let mut t = s0;
    let mut h = -1e-3;
    let mut steps = 0;
    while t > s {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::NonConvergence(format!("Painlevé II: step budget exhausted at s={t}")));
        }
        if t + h < s {
            h = s - t;
        }
        let mut k = [[0.0; 4]; 7];
        for i in 0..7 {
            let mut ui = u;
            for (j, kj) in k.iter().enumerate().take(i) {
                for c in 0..4 {
                    ui[c] += h * A[i][j] * kj[c];
                }
            }
            k[i] = rhs(t + C[i] * h, &ui);
        }
        let mut u5 = u;
        let mut err: f64 = 0.0;
        for c in 0..4 {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for i in 0..7 {
                d5 += B5[i] * k[i][c];
                d4 += B4[i] * k[i][c];
            }
            u5[c] += h * d5;
            let sc = ATOL + RTOL * u[c].abs().max(u5[c].abs());
            err = err.max((h * (d5 - d4)).abs() / sc);
        }
        if !err.is_finite() {
            return Err(Error::NonConvergence(format!("Painlevé II: non-finite state at s={t}")));
        }
        if err <= 1.0 {
            t += h;
            u = u5;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        if h.abs() < 1e-12 {
            return Err(Error::NonConvergence(format!("Painlevé II: step size collapsed at s={t}")));
        }
    }
    Ok(PainleveValue { y: u[0], dy: u[1], q: u[2], l: u[3] })
}

/// F2(s) from the Hastings–McLeod solution, started at s0 = 8.
pub fn painleve2_f2(s: f64) -> Result<f64> {
    painleve2_solve(s, PAINLEVE_S0).map(|v| v.f2())
}
