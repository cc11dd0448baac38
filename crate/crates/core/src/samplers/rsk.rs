use crate::error::{invalid, Result};
use crate::symcore::Partition;
use crate::RngStream;
use rand::Rng;
use rand_distr::{Distribution, Poisson};

/// Row insertion tableaux (P, Q) of a word.
pub fn rsk(word: &[i64]) -> (Vec<Vec<i64>>, Vec<Vec<usize>>) {
    let mut p: Vec<Vec<i64>> = Vec::new();
    let mut q: Vec<Vec<usize>> = Vec::new();
    for (step, &a) in word.iter().enumerate() {
        let mut x = a;
        let mut r = 0;
        loop {
            if r == p.len() {
                p.push(vec![x]);
                q.push(vec![step + 1]);
                break;
            }
            let row = &mut p[r];
            let k = row.partition_point(|&y| y <= x);
            if k == row.len() {
                row.push(x);
                q[r].push(step + 1);
                break;
            }
            std::mem::swap(&mut row[k], &mut x);
            r += 1;
        }
    }
    (p, q)
}

/// Shape of the insertion tableau. Only the rows are kept, so this is
/// cheaper than `rsk` on long words.
pub fn rsk_shape(word: &[i64]) -> Partition {
    let mut p: Vec<Vec<i64>> = Vec::new();
    for &a in word {
        let mut x = a;
        let mut r = 0;
        loop {
            if r == p.len() {
                p.push(vec![x]);
                break;
            }
            let row = &mut p[r];
            let k = row.partition_point(|&y| y <= x);
            if k == row.len() {
                row.push(x);
                break;
            }
            std::mem::swap(&mut row[k], &mut x);
            r += 1;
        }
    }
    Partition::from_sorted(p.iter().map(|r| r.len() as u32).collect())
}

/// Longest strictly increasing subsequence (patience sorting).
pub fn lis_length(word: &[i64]) -> usize {
    let mut tops: Vec<i64> = Vec::new();
    for &a in word {
        let k = tops.partition_point(|&y| y < a);
        if k == tops.len() {
            tops.push(a);
        } else {
            tops[k] = a;
        }
    }
    tops.len()
}

/// Points (t, x) of a planar configuration; `generation` counts how many
/// Viennot iterations produced it (0 for a sampled field).
#[derive(Clone, Debug, PartialEq)]
pub struct PointField {
    points: Vec<(f64, f64)>,
    pub generation: u32,
}

impl PointField {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        let f = PointField { points, generation: 0 };
        f.check_distinct()?;
        Ok(f)
    }

    fn check_distinct(&self) -> Result<()> {
        for k in 0..2 {
            let mut c: Vec<f64> = self.points.iter().map(|p| if k == 0 { p.0 } else { p.1 }).collect();
            if c.iter().any(|v| !v.is_finite()) {
                return Err(invalid!("point coordinates must be finite"));
            }
            c.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid!("duplicate {} coordinate in point field", if k == 0 { "t" } else { "x" }));
            }
        }
        Ok(())
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The field of σ: points (i, σ(i)).
    pub fn from_permutation(sigma: &[i64]) -> Result<Self> {
        Self::new(sigma.iter().enumerate().map(|(i, &s)| ((i + 1) as f64, s as f64)).collect())
    }

    /// Ranks of the x-coordinates after sorting by t: the word read off the field.
    pub fn word(&self) -> Vec<i64> {
        let mut pts = self.points.clone();
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut xs: Vec<f64> = pts.iter().map(|p| p.1).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.iter().map(|p| xs.partition_point(|&v| v < p.1) as i64 + 1).collect()
    }

    /// Poisson field of unit intensity on [0, t_max] × [0, x_max]; coordinate
    /// collisions are redrawn.
    pub fn poisson(t_max: f64, x_max: f64, rng: &mut RngStream) -> Result<Self> {
        if !(t_max >= 0.0 && x_max >= 0.0 && (t_max * x_max).is_finite()) {
            return Err(invalid!("field rectangle must have finite nonnegative sides"));
        }
        let area = t_max * x_max;
        let n = if area > 0.0 {
            Poisson::new(area).map_err(|e| invalid!("{e}"))?.sample(rng) as usize
        } else {
            0
        };
        let mut pts = Vec::with_capacity(n);
        let mut ts = std::collections::HashSet::new();
        let mut xs = std::collections::HashSet::new();
        while pts.len() < n {
            let p: (f64, f64) = (rng.random::<f64>() * t_max, rng.random::<f64>() * x_max);
            if ts.contains(&p.0.to_bits()) || xs.contains(&p.1.to_bits()) {
                continue;
            }
            ts.insert(p.0.to_bits());
            xs.insert(p.1.to_bits());
            pts.push(p);
        }
        Ok(PointField { points: pts, generation: 0 })
    }
}

/// One Viennot generation: broken lines are the piles of patience sorting
/// in t-order, and each line's corners form the next field.
/// Returns (number of lines, corner field).
pub fn viennot_step(pf: &PointField) -> (usize, PointField) {
    let mut pts = pf.points.clone();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut piles: Vec<Vec<(f64, f64)>> = Vec::new();
    for p in pts {
        let k = piles.partition_point(|pile| pile.last().unwrap().1 < p.1);
        if k == piles.len() {
            piles.push(vec![p]);
        } else {
            piles[k].push(p);
        }
    }
    let mut corners = Vec::new();
    for pile in &piles {
        for w in pile.windows(2) {
            corners.push((w[1].0, w[0].1));
        }
    }
    (piles.len(), PointField { points: corners, generation: pf.generation + 1 })
}

/// λ from iterating Viennot's construction until the field is exhausted.
pub fn viennot_shape(pf: &PointField) -> Result<Partition> {
    pf.check_distinct()?;
    let mut rows = Vec::new();
    let mut cur = pf.clone();
    while !cur.is_empty() {
        let (k, next) = viennot_step(&cur);
        rows.push(k as u32);
        cur = next;
    }
    Ok(Partition::from_sorted(rows))
}
