use super::PATH_TUPLE_CAP;
use crate::error::{invalid, Error, Result};
use crate::linalg::Mat;
use num_complex::Complex64;

/// Finite directed acyclic graph with complex edge weights.
#[derive(Clone, Debug)]
pub struct WeightedDag {
    n: usize,
    out: Vec<Vec<(usize, Complex64)>>,
    topo: Vec<usize>,
}

impl WeightedDag {
    pub fn new(n: usize, edges: &[(usize, usize, Complex64)]) -> Result<Self> {
        let mut out = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b, w) in edges {
            if a >= n || b >= n {
                return Err(invalid!("edge ({a},{b}) references a missing vertex"));
            }
            if !(w.re.is_finite() && w.im.is_finite()) {
                return Err(invalid!("edge weight must be finite"));
            }
            out[a].push((b, w));
            indeg[b] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            topo.push(v);
            for &(b, _) in &out[v] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    stack.push(b);
                }
            }
        }
        if topo.len() != n {
            return Err(invalid!("graph has a directed cycle"));
        }
        Ok(WeightedDag { n, out, topo })
    }

    /// Unit-weight grid with steps right and up; vertex (r, c) has id r·cols + c.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        let one = Complex64::new(1.0, 0.0);
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1, one));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols, one));
                }
            }
        }
        WeightedDag::new(rows * cols, &edges).expect("grid is acyclic")
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// T(u, ·): total weight of all paths from u.
    pub fn path_sums_from(&self, u: usize) -> Vec<Complex64> {
        let mut t = vec![Complex64::new(0.0, 0.0); self.n];
        t[u] = Complex64::new(1.0, 0.0);
        for &v in &self.topo {
            let tv = t[v];
            if tv == Complex64::new(0.0, 0.0) {
                continue;
            }
            for &(b, w) in &self.out[v] {
                t[b] += tv * w;
            }
        }
        t
    }

    fn paths(&self, u: usize, v: usize, budget: &mut usize) -> Result<Vec<(Vec<usize>, Complex64)>> {
        let mut out = Vec::new();
        let mut stack = vec![(u, vec![u], Complex64::new(1.0, 0.0))];
        while let Some((x, path, w)) = stack.pop() {
            if x == v {
                if *budget == 0 {
                    return Err(Error::Budget(format!("path enumeration exceeds cap {PATH_TUPLE_CAP}")));
                }
                *budget -= 1;
                out.push((path, w));
                continue;
            }
            for &(b, ew) in &self.out[x] {
                let mut p = path.clone();
                p.push(b);
                stack.push((b, p, w * ew));
            }
        }
        Ok(out)
    }
}

/// det[T(u_i, v_j)], or with `brute` the direct sum over vertex-disjoint path
/// tuples u_i → v_i. The two agree when no disjoint tuple connects the sources
/// to a nontrivial permutation of the sinks; that is the caller's obligation.
pub fn lgv_count(g: &WeightedDag, sources: &[usize], sinks: &[usize], brute: bool) -> Result<Complex64> {
    if sources.len() != sinks.len() {
        return Err(invalid!("need as many sinks as sources"));
    }
    if sources.iter().chain(sinks).any(|&v| v >= g.n) {
        return Err(invalid!("source or sink is not a vertex"));
    }
    let n = sources.len();
    if !brute {
        let t: Vec<Vec<Complex64>> = sources.iter().map(|&u| g.path_sums_from(u)).collect();
        return Ok(Mat::from_fn(n, |i, j| t[i][sinks[j]]).det());
    }
    let mut budget = PATH_TUPLE_CAP;
    let per: Vec<Vec<(Vec<usize>, Complex64)>> =
        (0..n).map(|i| g.paths(sources[i], sinks[i], &mut budget)).collect::<Result<_>>()?;
    let mut used = vec![false; g.n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut visited = 0usize;
    disjoint(&per, 0, &mut used, Complex64::new(1.0, 0.0), &mut total, &mut visited)?;
    Ok(total)
}

fn disjoint(
    per: &[Vec<(Vec<usize>, Complex64)>],
    i: usize,
    used: &mut [bool],
    w: Complex64,
    total: &mut Complex64,
    visited: &mut usize,
) -> Result<()> {
    if i == per.len() {
        *total += w;
        return Ok(());
    }
    for (path, pw) in &per[i] {
        *visited += 1;
        if *visited > PATH_TUPLE_CAP {
            return Err(Error::Budget(format!("path tuple enumeration exceeds cap {PATH_TUPLE_CAP}")));
        }
        if path.iter().any(|&v| used[v]) {
            continue;
        }
        for &v in path {
            used[v] = true;
        }
        disjoint(per, i + 1, used, w * pw, total, visited)?;
        for &v in path {
            used[v] = false;
        }
    }
    Ok(())
}
