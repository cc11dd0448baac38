use crate::error::{invalid, Error, Result};
use crate::symcore::Partition;
use crate::RngStream;
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

/// Interlacing array x_i^j, 1 ≤ i ≤ j ≤ N, with x_{i−1}^j < x_{i−1}^{j−1} ≤ x_i^j.
/// Level j holds λ^{(j)} through x_i^j = λ^{(j)}_{j+1−i} + i − j.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GTPattern {
    levels: Vec<Vec<i64>>,
}

impl GTPattern {
    /// All λ^{(j)} = ∅: x_i^j = i − j.
    pub fn packed(n: usize) -> Self {
        GTPattern { levels: (1..=n).map(|j| (1..=j).map(|i| i as i64 - j as i64).collect()).collect() }
    }

    pub fn from_levels(levels: Vec<Vec<i64>>) -> Result<Self> {
        if levels.iter().enumerate().any(|(j, l)| l.len() != j + 1) {
            return Err(invalid!("level j must hold j particles"));
        }
        let p = GTPattern { levels };
        if !p.is_interlacing() {
            return Err(invalid!("levels do not interlace"));
        }
        Ok(p)
    }

    pub fn from_partitions(parts: &[Partition]) -> Result<Self> {
        let levels = parts
            .iter()
            .enumerate()
            .map(|(j0, l)| {
                let j = j0 + 1;
                (1..=j).map(|i| l.part(j - i) as i64 + i as i64 - j as i64).collect()
            })
            .collect();
        Self::from_levels(levels)
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    /// x_i^j, 1-based.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.levels[j - 1][i - 1]
    }

    pub fn level(&self, j: usize) -> &[i64] {
        &self.levels[j - 1]
    }

    pub fn levels(&self) -> &[Vec<i64>] {
        &self.levels
    }

    /// λ^{(j)}.
    pub fn partition(&self, j: usize) -> Partition {
        let l = &self.levels[j - 1];
        Partition::from_sorted((1..=j).rev().map(|i| (l[i - 1] - i as i64 + j as i64) as u32).collect())
    }

    pub fn is_interlacing(&self) -> bool {
        for j in 1..=self.n() {
            let l = &self.levels[j - 1];
            if l.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            if j == 1 {
                continue;
            }
            let up = &self.levels[j - 2];
            for i in 2..=j {
                // x_{i−1}^j < x_{i−1}^{j−1} ≤ x_i^j
                if !(l[i - 2] < up[i - 2] && up[i - 2] <= l[i - 1]) {
                    return false;
                }
            }
        }
        // λ^{(j)} must stay a partition: x_1^j ≥ 1 − j
        self.levels.iter().enumerate().all(|(j0, l)| l[0] >= -(j0 as i64))
    }

    fn check(&self) -> Result<()> {
        if self.is_interlacing() {
            Ok(())
        } else {
            Err(Error::Invariant("interlacing violated".into()))
        }
    }
}

/// One step of the sequential Bernoulli dynamics with jump probability
/// b/(1+b). Every particle flips its coin, used or not.
pub fn gt_bernoulli_step(x: &GTPattern, b: f64, rng: &mut RngStream) -> Result<GTPattern> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(invalid!("b must be positive, got {b}"));
    }
    let p = b / (1.0 + b);
    let n = x.n();
    let coins: Vec<Vec<bool>> = (1..=n).map(|j| (0..j).map(|_| rng.random::<f64>() < p).collect()).collect();
    let mut new = x.clone();
    for k in 1..=n {
        for i in 1..=k {
            let old = x.get(i, k);
            let pushed = i > 1 && old == new.get(i - 1, k - 1) - 1;
            let blocked = i < k && new.get(i, k - 1) == old + 1;
            if pushed && blocked {
                return Err(Error::Invariant(format!("particle ({i},{k}) is pushed and blocked at once")));
            }
            let mv = pushed || (!blocked && coins[k - 1][i - 1]);
            new.levels[k - 1][i - 1] = old + mv as i64;
        }
    }
    new.check()?;
    Ok(new)
}

/// Jump rates of the continuous-time dynamics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rates {
    /// Rate 1 unless blocked.
    PushBlock,
    /// The q-deformed rates; q → 0 recovers `PushBlock`.
    QTasep { q: f64 },
}

impl Rates {
    fn rate(&self, x: &GTPattern, i: usize, j: usize) -> f64 {
        let v = x.get(i, j);
        match *self {
            Rates::PushBlock => {
                if i < j && x.get(i, j - 1) == v + 1 {
                    0.0
                } else {
                    1.0
                }
            }
            Rates::QTasep { q } => {
                let mut r = 1.0;
                if i < j {
                    r *= 1.0 - q.powi((x.get(i, j - 1) - v - 1) as i32);
                }
                if i > 1 {
                    r *= 1.0 - q.powi((v - x.get(i - 1, j)) as i32);
                }
                if i > 1 && j > 1 {
                    r /= 1.0 - q.powi((v - x.get(i - 1, j - 1) + 1) as i32);
                }
                r
            }
        }
    }
}

/// A particle move: time, level j, index i, new position.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GtEvent {
    pub time: f64,
    pub level: usize,
    pub index: usize,
    pub position: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub initial: GTPattern,
    pub events: Vec<GtEvent>,
    pub last: GTPattern,
    /// Clock rings that moved at least one particle.
    pub jumps: u64,
}

/// Event-driven run up to time τ. One exponential with the total rate
/// gives the next ring, a uniform picks the particle in proportion to its rate.
pub fn continuous_run(n: usize, tau: f64, rates: Rates, record: bool, rng: &mut RngStream) -> Result<Trajectory> {
    if n == 0 {
        return Err(invalid!("N must be positive"));
    }
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(invalid!("tau must be finite and ≥ 0"));
    }
    if let Rates::QTasep { q } = rates {
        if !(q > 0.0 && q <= 0.99) {
            return Err(invalid!("q must lie in (0, 0.99], got {q}"));
        }
    }
    let mut x = GTPattern::packed(n);
    let initial = x.clone();
    let idx: Vec<(usize, usize)> = (1..=n).flat_map(|j| (1..=j).map(move |i| (i, j))).collect();
    let mut r: Vec<f64> = idx.iter().map(|&(i, j)| rates.rate(&x, i, j)).collect();
    let mut events = Vec::new();
    let mut t = 0.0;
    let mut jumps = 0;
    loop {
        let total: f64 = r.iter().sum();
        let e: f64 = Exp1.sample(rng);
        let u: f64 = rng.random();
        t += e / total;
        if t > tau {
            break;
        }
        let mut target = u * total;
        let mut pick = idx.len() - 1;
        for (k, rk) in r.iter().enumerate() {
            if target < *rk {
                pick = k;
                break;
            }
            target -= rk;
        }
        let (mut i, mut j) = idx[pick];
        // move and push up the diagonal while positions coincide
        let v = x.get(i, j);
        loop {
            x.levels[j - 1][i - 1] += 1;
            if record {
                events.push(GtEvent { time: t, level: j, index: i, position: v + 1 });
            }
            if j < n && x.get(i + 1, j + 1) == v {
                i += 1;
                j += 1;
            } else {
                break;
            }
        }
        jumps += 1;
        for (k, &(a, b)) in idx.iter().enumerate() {
            r[k] = rates.rate(&x, a, b);
        }
        debug_assert!(x.is_interlacing());
    }
    x.check()?;
    Ok(Trajectory { initial, events, last: x, jumps })
}

/// Push-block dynamics Y(τ) from the packed state.
pub fn gt_poisson_run(n: usize, tau: f64, rng: &mut RngStream) -> Result<Trajectory> {
    continuous_run(n, tau, Rates::PushBlock, true, rng)
}

/// q-TASEP dynamics Z(τ) on the whole array from the packed state.
pub fn qtasep_run(n: usize, q: f64, tau: f64, rng: &mut RngStream) -> Result<Trajectory> {
    continuous_run(n, tau, Rates::QTasep { q }, true, rng)
}

/// λ_N^{(N)}, the smallest row of the top level, read off x_1^N.
pub fn smallest_row(x: &GTPattern) -> i64 {
    let n = x.n() as i64;
    x.get(1, x.n()) + n - 1
}
