use super::schur_process::{SchurSequence, SequenceSample, Step};
use crate::error::{invalid, Result};
use crate::symcore::{Partition, Specialization};
use crate::RngStream;
use serde::{Deserialize, Serialize};

/// Filling of B^A/π by nonnegative integers, weakly decreasing along rows
/// and columns. Cells of π are stored as 0 and excluded from the support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewPlanePartition {
    pub a: usize,
    pub b: usize,
    pub pi: Partition,
    pub filling: Vec<Vec<u32>>,
}

impl SkewPlanePartition {
    fn in_support(pi: &Partition, i: usize, j: usize) -> bool {
        j >= pi.part(i) as usize
    }

    pub fn new(a: usize, b: usize, pi: Partition, filling: Vec<Vec<u32>>) -> Result<Self> {
        if pi.len() > a || pi.first() as usize > b {
            return Err(invalid!("π = {pi} does not fit in the {a}×{b} box"));
        }
        if filling.len() != a || filling.iter().any(|r| r.len() != b) {
            return Err(invalid!("filling must be {a}×{b}"));
        }
        let p = SkewPlanePartition { a, b, pi, filling };
        for i in 0..a {
            for j in 0..b {
                let v = p.filling[i][j];
                if !Self::in_support(&p.pi, i, j) {
                    if v != 0 {
                        return Err(invalid!("cell ({},{}) lies in π but holds {v}", i + 1, j + 1));
                    }
                    continue;
                }
                if (j + 1 < b && p.filling[i][j + 1] > v) || (i + 1 < a && p.filling[i + 1][j] > v) {
                    return Err(invalid!("filling increases away from cell ({},{})", i + 1, j + 1));
                }
            }
        }
        Ok(p)
    }

    pub fn volume(&self) -> u64 {
        self.filling.iter().flatten().map(|&v| v as u64).sum()
    }

    /// Diagonal slices λ^{(k)}, k = 1..A+B+1, along diagonals j − i = k − A − 1.
    pub fn slices(&self) -> Vec<Partition> {
        (1..=self.a + self.b + 1)
            .map(|k| {
                let d = k as i64 - self.a as i64 - 1;
                let rows = (0..self.a)
                    .filter_map(|i| {
                        let j = i as i64 + d;
                        (j >= 0 && (j as usize) < self.b && Self::in_support(&self.pi, i, j as usize))
                            .then(|| self.filling[i][j as usize])
                    })
                    .collect();
                Partition::from_sorted(rows)
            })
            .collect()
    }

    /// Inverse of `slices`.
    pub fn from_slices(a: usize, b: usize, pi: Partition, slices: &[Partition]) -> Result<Self> {
        if slices.len() != a + b + 1 {
            return Err(invalid!("expected {} slices, got {}", a + b + 1, slices.len()));
        }
        let mut filling = vec![vec![0u32; b]; a];
        for (k0, lam) in slices.iter().enumerate() {
            let d = k0 as i64 - a as i64;
            let mut r = 0;
            for (i, row) in filling.iter_mut().enumerate() {
                let j = i as i64 + d;
                if j >= 0 && (j as usize) < b && Self::in_support(&pi, i, j as usize) {
                    row[j as usize] = lam.part(r);
                    r += 1;
                }
            }
            if r < lam.len() {
                return Err(invalid!("slice {} has more rows than its diagonal", k0 + 1));
            }
        }
        Self::new(a, b, pi, filling)
    }
}

/// L(π) = {A + π_i − i + 1}.
pub fn back_wall(a: usize, pi: &Partition) -> Vec<usize> {
    (1..=a).map(|i| a + pi.part(i - 1) as usize + 1 - i).collect()
}

/// Slots of the Schur process whose law is q^volume on B^A/π: slot j moves
/// λ^{(j)} to λ^{(j+1)}, up with α = q^{−j} on the back wall, down with α = q^j elsewhere.
pub fn plane_partition_slots(a: usize, b: usize, pi: &Partition, q: f64) -> Result<(Vec<Specialization>, Vec<Step>)> {
    if !(q > 0.0 && q < 1.0) {
        return Err(invalid!("q must lie in (0,1), got {q}"));
    }
    if pi.len() > a || pi.first() as usize > b {
        return Err(invalid!("π = {pi} does not fit in the {a}×{b} box"));
    }
    let wall = back_wall(a, pi);
    let mut specs = Vec::new();
    let mut steps = Vec::new();
    for j in 1..=a + b {
        if wall.contains(&j) {
            specs.push(Specialization::single_alpha(q.powi(-(j as i32)))?);
            steps.push(Step::Up);
        } else {
            specs.push(Specialization::single_alpha(q.powi(j as i32))?);
            steps.push(Step::Down);
        }
    }
    Ok((specs, steps))
}

/// Sampler for q^volume on B^A/π.
#[derive(Clone)]
pub struct PlanePartitionSampler {
    a: usize,
    b: usize,
    pi: Partition,
    seq: SchurSequence,
}

impl PlanePartitionSampler {
    pub fn new(a: usize, b: usize, pi: Partition, q: f64, cutoff: u32) -> Result<Self> {
        let (specs, steps) = plane_partition_slots(a, b, &pi, q)?;
        Ok(PlanePartitionSampler { a, b, pi, seq: SchurSequence::new(&specs, &steps, cutoff)? })
    }

    pub fn sample(&mut self, rng: &mut RngStream) -> Result<(SkewPlanePartition, f64)> {
        let SequenceSample { partitions, max_deficit } = self.seq.sample(rng)?;
        let mut slices = vec![Partition::empty()];
        slices.extend(partitions);
        Ok((SkewPlanePartition::from_slices(self.a, self.b, self.pi.clone(), &slices)?, max_deficit))
    }
}

/// Coefficients of ∏_{n≥1} (1 − x^n)^{−n} up to x^max, the plane partition counts.
pub fn macmahon_coefficients(max: usize) -> Vec<u64> {
    let mut c = vec![0u64; max + 1];
    c[0] = 1;
    for n in 1..=max {
        // multiply by (1 − x^n)^{−1} n times
        for _ in 0..n {
            for k in n..=max {
                c[k] += c[k - n];
            }
        }
    }
    c
}
