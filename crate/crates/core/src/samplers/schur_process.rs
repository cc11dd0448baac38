use crate::error::{invalid, Error, Result};
use crate::symcore::{pair_h, subpartitions_of, supersets_of, Partition, SpecTable, Specialization};
use crate::RngStream;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Conditional mass left unassigned before an upward transition stops.
pub const TAIL_MASS: f64 = 1e-12;
/// Largest unassigned mass tolerated at the cutoff.
pub const MAX_DEFICIT: f64 = 1e-9;

/// Direction of one slot: ν ≺ ν′ (grow by ρ) or ν ≻ ν′ (shrink by ρ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Up,
    Down,
}

/// Transition row: targets with probabilities, and the mass lost to the cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionRow {
    pub targets: Vec<(Partition, f64)>,
    pub deficit: f64,
}

impl TransitionRow {
    pub fn prob(&self, mu: &Partition) -> f64 {
        self.targets.iter().find(|(m, _)| m == mu).map_or(0.0, |t| t.1)
    }

    fn sample(&self, rng: &mut RngStream) -> Partition {
        let total: f64 = self.targets.iter().map(|t| t.1).sum();
        let mut u = rng.random::<f64>() * total;
        for (m, p) in &self.targets {
            if u < *p {
                return m.clone();
            }
            u -= p;
        }
        self.targets.iter().rev().find(|t| t.1 > 0.0).expect("row has positive mass").0.clone()
    }
}

/// Evaluation cache for one specialization.
#[derive(Clone)]
struct Tab(SpecTable);

impl Tab {
    fn new(rho: &Specialization) -> Self {
        Tab(SpecTable::new(rho, 16))
    }
    fn s(&mut self, l: &Partition) -> f64 {
        self.0.skew(l, &Partition::empty())
    }
    fn skew(&mut self, l: &Partition, m: &Partition) -> f64 {
        self.0.skew(l, m)
    }
}

fn up_row(lambda: &Partition, rho: &mut Tab, rho_p: &mut Tab, h: f64, cutoff: u32) -> Result<TransitionRow> {
    let sl = rho.s(lambda);
    if sl == 0.0 {
        return Err(invalid!("s_λ(ρ) = 0 at λ = {lambda}: state outside the support"));
    }
    let hook = rho.0.spec().hook_support();
    let mut targets = Vec::new();
    let mut mass = 0.0;
    for m in 0..=cutoff {
        for mu in supersets_of(lambda, m, hook) {
            let w = rho.s(&mu) / sl * rho_p.skew(&mu, lambda) / h;
            if w > 0.0 {
                mass += w;
                targets.push((mu, w));
            }
        }
        if 1.0 - mass < TAIL_MASS {
            return Ok(TransitionRow { targets, deficit: (1.0 - mass).max(0.0) });
        }
    }
    let deficit = (1.0 - mass).max(0.0);
    if deficit > MAX_DEFICIT {
        return Err(Error::Budget(format!("cutoff {cutoff} leaves conditional mass {deficit:e} from λ = {lambda}")));
    }
    Ok(TransitionRow { targets, deficit })
}

/// p↑_{λ→μ}(ρ; ρ′) = s_μ(ρ) s_{μ/λ}(ρ′) / (H(ρ; ρ′) s_λ(ρ)), over |μ/λ| ≤ cutoff.
pub fn p_up_row(lambda: &Partition, rho: &Specialization, rho_p: &Specialization, cutoff: u32) -> Result<TransitionRow> {
    let h = pair_h(rho, rho_p)?;
    up_row(lambda, &mut Tab::new(rho), &mut Tab::new(rho_p), h, cutoff)
}

fn down_row(lambda: &Partition, rho: &mut Tab, rho_p: &mut Tab, both: &mut Tab) -> Result<TransitionRow> {
    let sl = both.s(lambda);
    if sl == 0.0 {
        return Err(invalid!("s_λ(ρ, ρ′) = 0 at λ = {lambda}: state outside the support"));
    }
    let mut targets = Vec::new();
    for mu in subpartitions_of(lambda) {
        let w = rho.s(&mu) * rho_p.skew(lambda, &mu) / sl;
        if w > 0.0 {
            targets.push((mu, w));
        }
    }
    let total: f64 = targets.iter().map(|t| t.1).sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::Invariant(format!("p↓ row from {lambda} sums to {total}")));
    }
    Ok(TransitionRow { targets, deficit: 0.0 })
}

/// p↓_{λ→μ}(ρ; ρ′) = s_μ(ρ) s_{λ/μ}(ρ′) / s_λ(ρ, ρ′).
pub fn p_down_row(lambda: &Partition, rho: &Specialization, rho_p: &Specialization) -> Result<TransitionRow> {
    down_row(lambda, &mut Tab::new(rho), &mut Tab::new(rho_p), &mut Tab::new(&rho.union(rho_p)))
}

pub fn p_up_sample(
    lambda: &Partition,
    rho: &Specialization,
    rho_p: &Specialization,
    rng: &mut RngStream,
    cutoff: u32,
) -> Result<Partition> {
    Ok(p_up_row(lambda, rho, rho_p, cutoff)?.sample(rng))
}

pub fn p_down_sample(lambda: &Partition, rho: &Specialization, rho_p: &Specialization, rng: &mut RngStream) -> Result<Partition> {
    Ok(p_down_row(lambda, rho, rho_p)?.sample(rng))
}

/// A sampled sequence together with the largest conditional mass that the
/// cutoff dropped along the way.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceSample {
    pub partitions: Vec<Partition>,
    pub max_deficit: f64,
}

/// Precomputed slot data for repeated sampling of one Schur process.
#[derive(Clone)]
pub struct SchurSequence {
    profile: Vec<Step>,
    slot: Vec<Tab>,
    /// union of the Down specializations strictly after slot k
    rest: Vec<Tab>,
    /// slot spec ∪ rest, for Down slots
    with_rest: Vec<Option<Tab>>,
    h: Vec<f64>,
    cutoff: u32,
}

impl SchurSequence {
    /// Slot k moves ν^{(k−1)} to ν^{(k)} along `profile[k]` with weight
    /// s_{ν′/ν}(ρ_k) or s_{ν/ν′}(ρ_k); the sequence starts and ends at ∅.
    pub fn new(specs: &[Specialization], profile: &[Step], cutoff: u32) -> Result<Self> {
        if specs.len() != profile.len() {
            return Err(invalid!("{} specializations for {} slots", specs.len(), profile.len()));
        }
        let t = specs.len();
        let mut rest_spec = vec![Specialization::trivial(); t];
        for k in (0..t.saturating_sub(1)).rev() {
            rest_spec[k] = if profile[k + 1] == Step::Down { specs[k + 1].union(&rest_spec[k + 1]) } else { rest_spec[k + 1].clone() };
        }
        let mut h = vec![1.0; t];
        for k in 0..t {
            if profile[k] == Step::Up {
                // finiteness of every H(ρ_up; ρ_down) with the down slot later
                for l in k + 1..t {
                    if profile[l] == Step::Down {
                        pair_h(&specs[k], &specs[l])?;
                    }
                }
                h[k] = pair_h(&rest_spec[k], &specs[k])?;
            }
        }
        Ok(SchurSequence {
            profile: profile.to_vec(),
            slot: specs.iter().map(Tab::new).collect(),
            with_rest: (0..t)
                .map(|k| (profile[k] == Step::Down).then(|| Tab::new(&specs[k].union(&rest_spec[k]))))
                .collect(),
            rest: rest_spec.iter().map(Tab::new).collect(),
            h,
            cutoff,
        })
    }

    /// Normalization Z = ∏ H(ρ_a; ρ_b) over Up slots a before Down slots b.
    pub fn partition_function(specs: &[Specialization], profile: &[Step]) -> Result<f64> {
        let mut z = 1.0;
        for a in 0..specs.len() {
            for b in a + 1..specs.len() {
                if profile[a] == Step::Up && profile[b] == Step::Down {
                    z *= pair_h(&specs[a], &specs[b])?;
                }
            }
        }
        Ok(z)
    }

    pub fn sample(&mut self, rng: &mut RngStream) -> Result<SequenceSample> {
        let mut cur = Partition::empty();
        let mut out = Vec::with_capacity(self.profile.len());
        let mut max_deficit: f64 = 0.0;
        for k in 0..self.profile.len() {
            let row = match self.profile[k] {
                Step::Up => up_row(&cur, &mut self.rest[k], &mut self.slot[k], self.h[k], self.cutoff)?,
                Step::Down => {
                    let both = self.with_rest[k].as_mut().expect("down slot");
                    down_row(&cur, &mut self.rest[k], &mut self.slot[k], both)?
                }
            };
            max_deficit = max_deficit.max(row.deficit);
            cur = row.sample(rng);
            out.push(cur.clone());
        }
        if !cur.is_empty() {
            return Err(Error::Invariant(format!("sequence ended at {cur} instead of ∅")));
        }
        Ok(SequenceSample { partitions: out, max_deficit })
    }
}

/// One draw of the Schur process with the given slots.
pub fn sample_schur_sequence(
    specs: &[Specialization],
    profile: &[Step],
    rng: &mut RngStream,
    cutoff: u32,
) -> Result<SequenceSample> {
    SchurSequence::new(specs, profile, cutoff)?.sample(rng)
}

/// Row of the two-level chain: λ^{(1)} → μ^{(1)} by p↑(ρ1; ρ′), then μ^{(2)}
/// as the middle point of p↑(ρ1,ρ2; ρ′) followed by p↓(ρ1; ρ2) ending at μ^{(1)}.
/// Keys are (μ^{(2)}, μ^{(1)}).
pub fn two_level_row(
    lambda2: &Partition,
    lambda1: &Partition,
    rho1: &Specialization,
    rho2: &Specialization,
    rho_p: &Specialization,
    cutoff: u32,
) -> Result<Vec<((Partition, Partition), f64)>> {
    let both = rho1.union(rho2);
    let first = p_up_row(lambda1, rho1, rho_p, cutoff)?;
    let second = p_up_row(lambda2, &both, rho_p, cutoff)?;
    let mut t1 = Tab::new(rho1);
    let mut t2 = Tab::new(rho2);
    let mut t12 = Tab::new(&both);
    let downs: Vec<TransitionRow> =
        second.targets.iter().map(|(mu, _)| down_row(mu, &mut t1, &mut t2, &mut t12)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (mu1, p1) in &first.targets {
        let mids: Vec<(Partition, f64)> = second
            .targets
            .iter()
            .zip(&downs)
            .map(|((mu2, pu), d)| (mu2.clone(), pu * d.prob(mu1)))
            .filter(|m| m.1 > 0.0)
            .collect();
        let z: f64 = mids.iter().map(|m| m.1).sum();
        if z == 0.0 {
            continue;
        }
        for (mu2, w) in mids {
            out.push(((mu2, mu1.clone()), p1 * w / z));
        }
    }
    Ok(out)
}

/// Draw from `two_level_row`.
pub fn two_level_sample(
    lambda2: &Partition,
    lambda1: &Partition,
    rho1: &Specialization,
    rho2: &Specialization,
    rho_p: &Specialization,
    rng: &mut RngStream,
    cutoff: u32,
) -> Result<(Partition, Partition)> {
    let row = two_level_row(lambda2, lambda1, rho1, rho2, rho_p, cutoff)?;
    let total: f64 = row.iter().map(|r| r.1).sum();
    let mut u = rng.random::<f64>() * total;
    for (k, p) in &row {
        if u < *p {
            return Ok(k.clone());
        }
        u -= p;
    }
    Ok(row.last().expect("nonempty row").0.clone())
}
