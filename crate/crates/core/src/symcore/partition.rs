use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

pub const DEFAULT_ENUM_CAP: u32 = 40;

/// Young diagram. Rows are stored weakly decreasing without trailing zeros.
/// The derived order compares row vectors lexicographically, and `partitions_of`
/// lists partitions in decreasing order of it (reverse lexicographic).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    rows: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(rows: Vec<u32>) -> Result<Self> {
        Partition::new(rows)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.rows
    }
}

impl Partition {
    /// Accepts trailing zeros; rejects increasing rows.
    pub fn new(mut rows: Vec<u32>) -> Result<Self> {
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid!("rows {:?} are not weakly decreasing", rows));
        }
        while rows.last() == Some(&0) {
            rows.pop();
        }
        Ok(Partition { rows })
    }

    /// Caller guarantees weakly decreasing rows; zeros are still trimmed.
    pub fn from_sorted(mut rows: Vec<u32>) -> Self {
        debug_assert!(rows.windows(2).all(|w| w[0] >= w[1]));
        while rows.last() == Some(&0) {
            rows.pop();
        }
        Partition { rows }
    }

    pub fn empty() -> Self {
        Partition { rows: Vec::new() }
    }

    pub fn row(n: u32) -> Self {
        Self::from_sorted(vec![n])
    }

    pub fn column(n: u32) -> Self {
        Self::from_sorted(vec![1; n as usize])
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// ℓ(λ).
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// |λ|.
    pub fn size(&self) -> u32 {
        self.rows.iter().sum()
    }

    /// λ_i with 0-based `i`; zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.rows.get(i).copied().unwrap_or(0)
    }

    pub fn first(&self) -> u32 {
        self.part(0)
    }

    pub fn conjugate(&self) -> Self {
        let m = self.first() as usize;
        let mut out = vec![0u32; m];
        for &r in &self.rows {
            for c in out.iter_mut().take(r as usize) {
                *c += 1;
            }
        }
        Partition { rows: out }
    }

    /// μ ⊂ λ as diagrams.
    pub fn contains(&self, mu: &Partition) -> bool {
        mu.len() <= self.len() && mu.rows.iter().zip(&self.rows).all(|(m, l)| m <= l)
    }

    /// λ/μ has at most one box per column, i.e. λ_{i+1} ≤ μ_i ≤ λ_i.
    pub fn is_horizontal_strip_over(&self, mu: &Partition) -> bool {
        if !self.contains(mu) {
            return false;
        }
        (0..self.len()).all(|i| self.part(i + 1) <= mu.part(i))
    }

    /// λ/μ has at most one box per row.
    pub fn is_vertical_strip_over(&self, mu: &Partition) -> bool {
        self.contains(mu) && (0..self.len()).all(|i| self.part(i) - mu.part(i) <= 1)
    }

    /// Partitions obtained by adding one box.
    pub fn add_box_all(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..=self.len() {
            if i == 0 || self.part(i - 1) > self.part(i) {
                let mut r = self.rows.clone();
                if i == r.len() {
                    r.push(1);
                } else {
                    r[i] += 1;
                }
                out.push(Partition { rows: r });
            }
        }
        out
    }

    /// Partitions obtained by removing one box.
    pub fn remove_box_all(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            if self.part(i) > self.part(i + 1) {
                let mut r = self.rows.clone();
                r[i] -= 1;
                out.push(Partition::from_sorted(r));
            }
        }
        out
    }

    /// Multiplicities m_k of each part size k ≥ 1 (index k).
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.first() as usize + 1];
        for &r in &self.rows {
            m[r as usize] += 1;
        }
        m
    }

    /// z_λ = ∏ k^{m_k} m_k!.
    pub fn z(&self) -> f64 {
        let mut z = 1.0;
        for (k, &mk) in self.multiplicities().iter().enumerate().skip(1) {
            for j in 1..=mk {
                z *= k as f64 * j as f64;
            }
        }
        z
    }

    /// Union of parts (the power-sum product p_λ p_μ = p_{λ∪μ}).
    pub fn union(&self, other: &Partition) -> Partition {
        let mut r: Vec<u32> = self.rows.iter().chain(&other.rows).copied().collect();
        r.sort_unstable_by(|a, b| b.cmp(a));
        Partition { rows: r }
    }

    /// Dominance order μ ≤ λ (equal sizes assumed by callers).
    pub fn dominated_by(&self, lambda: &Partition) -> bool {
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..self.len().max(lambda.len()) {
            a += self.part(i);
            b += lambda.part(i);
            if a > b {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "(")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n`, optionally with at most `max_len` rows, in reverse
/// lexicographic order. Fails above `DEFAULT_ENUM_CAP`.
pub fn partitions_of(n: u32, max_len: Option<usize>) -> Result<Vec<Partition>> {
    partitions_of_capped(n, max_len, DEFAULT_ENUM_CAP)
}

pub fn partitions_of_capped(n: u32, max_len: Option<usize>, cap: u32) -> Result<Vec<Partition>> {
    if n > cap {
        return Err(Error::Budget(format!("partition enumeration of {n} exceeds cap {cap}")));
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, n, max_len.unwrap_or(usize::MAX), &mut cur, &mut out);
    Ok(out)
}

fn fill(rest: u32, max_part: u32, max_len: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { rows: cur.clone() });
        return;
    }
    if cur.len() == max_len {
        return;
    }
    for p in (1..=rest.min(max_part)).rev() {
        cur.push(p);
        fill(rest - p, p, max_len, cur, out);
        cur.pop();
    }
}

/// All partitions with |λ| ≤ n, grouped by size.
pub fn partitions_up_to(n: u32, max_len: Option<usize>) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for k in 0..=n {
        out.extend(partitions_of(k, max_len)?);
    }
    Ok(out)
}

/// Partitions fitting in a `max_len × max_part` box.
pub fn partitions_in_box(max_len: usize, max_part: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    boxed(max_len, max_part, &mut cur, &mut out);
    out
}

fn boxed(max_len: usize, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    out.push(Partition { rows: cur.clone() });
    if cur.len() == max_len {
        return;
    }
    let top = cur.last().copied().unwrap_or(max_part);
    for p in 1..=top {
        cur.push(p);
        boxed(max_len, max_part, cur, out);
        cur.pop();
    }
}

/// Partitions μ ⊃ ν with |μ/ν| = m. With `hook = Some((a, b))` only μ with
/// μ_{a+1} ≤ b are produced (the support of s_μ at a α's and b β's).
pub fn supersets_of(nu: &Partition, m: u32, hook: Option<(usize, u32)>) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let max_rows = nu.len() + m as usize;
    grow(nu, m, hook, max_rows, &mut cur, &mut out);
    out
}

fn grow(nu: &Partition, rest: u32, hook: Option<(usize, u32)>, max_rows: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    let i = cur.len();
    let lo = nu.part(i);
    if rest == 0 {
        // remaining rows must equal ν's rows and still respect the bounds
        let prev = cur.last().copied().unwrap_or(u32::MAX);
        if i < nu.len() && nu.part(i) > prev {
            return;
        }
        if let Some((a, b)) = hook {
            if (i.max(a)..nu.len()).any(|k| nu.part(k) > b) {
                return;
            }
        }
        let mut rows = cur.clone();
        rows.extend_from_slice(&nu.rows()[i.min(nu.len())..]);
        out.push(Partition::from_sorted(rows));
        return;
    }
    if i >= max_rows {
        return;
    }
    let mut hi = cur.last().copied().unwrap_or(lo + rest).min(lo + rest);
    if let Some((a, b)) = hook {
        if i >= a {
            hi = hi.min(b);
        }
    }
    if hi < lo {
        return;
    }
    for r in (lo..=hi).rev() {
        if r == 0 {
            break;
        }
        cur.push(r);
        grow(nu, rest - (r - lo), hook, max_rows, cur, out);
        cur.pop();
    }
}

/// All μ ⊂ λ.
pub fn subpartitions_of(lambda: &Partition) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    shrink(lambda, &mut cur, &mut out);
    out
}

fn shrink(lambda: &Partition, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    let i = cur.len();
    if i == lambda.len() {
        out.push(Partition::from_sorted(cur.clone()));
        return;
    }
    let hi = lambda.part(i).min(cur.last().copied().unwrap_or(u32::MAX));
    for r in (0..=hi).rev() {
        cur.push(r);
        shrink(lambda, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_recurrence(n: u32) -> u64 {
        // p(n) by the "largest part at most k" table.
        let n = n as usize;
        let mut t = vec![vec![0u64; n + 1]; n + 1];
        for k in 0..=n {
            t[0][k] = 1;
        }
        for m in 1..=n {
            for k in 1..=n {
                t[m][k] = t[m][k - 1] + if k <= m { t[m - k][k] } else { 0 };
            }
        }
        t[n][n]
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(partitions_of(0, None).unwrap(), vec![Partition::empty()]);
        let p3: Vec<Vec<u32>> = partitions_of(3, None).unwrap().into_iter().map(Into::into).collect();
        assert_eq!(p3, vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(partitions_of(10, None).unwrap().len(), 42);
        for n in 0..=20 {
            assert_eq!(partitions_of(n, None).unwrap().len() as u64, count_recurrence(n));
        }
    }

    #[test]
    fn cap_enforced() {
        assert_eq!(partitions_of(41, None).unwrap_err().code(), "budget-exceeded");
    }

    #[test]
    fn reverse_lex_order() {
        let ps = partitions_of(12, None).unwrap();
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn conjugate_and_strips() {
        let l = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(l.conjugate().rows(), &[2, 1, 1]);
        assert!(l.is_horizontal_strip_over(&Partition::row(1)));
        assert!(!Partition::column(2).is_horizontal_strip_over(&Partition::empty()));
        assert!(Partition::column(2).is_vertical_strip_over(&Partition::empty()));
        assert_eq!(Partition::new(vec![2, 1, 1, 0]).unwrap().z(), 4.0);
    }

    #[test]
    fn box_counts() {
        assert_eq!(partitions_in_box(2, 2).len(), 6);
        let l = Partition::new(vec![2, 1]).unwrap();
        assert_eq!(l.add_box_all().len(), 3);
        assert_eq!(l.remove_box_all().len(), 2);
    }
}
