use super::rsk::PointField;

#[derive(Clone, Copy, Debug)]
struct Edge {
    // position at time τ is c − τ for an up step, c + τ for a down step
    c: f64,
    up: bool,
}

impl Edge {
    fn pos(&self, tau: f64) -> f64 {
        if self.up {
            self.c - tau
        } else {
            self.c + tau
        }
    }
}

/// Height h(0, t) of the polynuclear growth started flat at 0, where each
/// point (s, y) of the field is a nucleation event at time s and position y.
/// Up steps travel left, down steps right, and a meeting pair annihilates.
pub fn png_height(pf: &PointField, t: f64) -> i64 {
    let mut seeds: Vec<(f64, f64)> = pf.points().iter().copied().filter(|p| p.0 <= t).collect();
    seeds.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    // edges kept sorted by current position
    let mut edges: Vec<Edge> = Vec::new();
    let mut now = 0.0;
    let mut next_seed = 0;
    loop {
        // earliest annihilation: a down step immediately followed by an up step
        let mut best: Option<(f64, usize)> = None;
        for k in 0..edges.len().saturating_sub(1) {
            let (a, b) = (edges[k], edges[k + 1]);
            if !a.up && b.up {
                let when = (b.c - a.c) / 2.0;
                if best.is_none_or(|(w, _)| when < w) {
                    best = Some((when, k));
                }
            }
        }
        let seed_time = seeds.get(next_seed).map_or(f64::INFINITY, |p| p.0);
        match best {
            Some((when, k)) if when <= seed_time && when <= t => {
                now = when.max(now);
                edges.drain(k..k + 2);
            }
            _ if seed_time <= t => {
                let (s, y) = seeds[next_seed];
                next_seed += 1;
                now = s;
                let up = Edge { c: y + s, up: true };
                let down = Edge { c: y - s, up: false };
                let at = edges.partition_point(|e| e.pos(now) < y);
                edges.insert(at, down);
                edges.insert(at, up);
            }
            _ => break,
        }
    }
    let mut h = 0;
    for e in &edges {
        if e.pos(t) < 0.0 {
            h += if e.up { 1 } else { -1 };
        }
    }
    h
}
