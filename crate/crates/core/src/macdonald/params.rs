use crate::error::{invalid, Result};
use crate::symcore::Partition;
use serde::{Deserialize, Serialize};

/// Macdonald parameters; t = 0 is the q-Whittaker case.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QTParams {
    q: f64,
    t: f64,
}

impl QTParams {
    pub fn new(q: f64, t: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(invalid!("q = {q} must lie in (0, 1)"));
        }
        if !(0.0..1.0).contains(&t) {
            return Err(invalid!("t = {t} must lie in [0, 1)"));
        }
        Ok(QTParams { q, t })
    }

    pub fn whittaker(q: f64) -> Result<Self> {
        Self::new(q, 0.0)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn is_whittaker(&self) -> bool {
        self.t == 0.0
    }

    /// z_λ(q,t) = z_λ ∏ (1 − q^{λ_i})/(1 − t^{λ_i}).
    pub fn z(&self, lambda: &Partition) -> f64 {
        lambda.rows().iter().fold(lambda.z(), |acc, &r| {
            acc * (1.0 - self.q.powi(r as i32)) / (1.0 - self.t.powi(r as i32))
        })
    }
}

/// ⟨p_λ, p_μ⟩_{q,t}.
pub fn qt_inner(lambda: &Partition, mu: &Partition, params: &QTParams) -> f64 {
    if lambda == mu {
        params.z(lambda)
    } else {
        0.0
    }
}
