use crate::error::{invalid, Result};
use crate::quadrature::gauss_legendre;
use std::f64::consts::PI;

/// How the reference interval (−1, 1) is carried onto (s, ∞).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HalfLineMap {
    /// x = s + scale·tan(π(u+1)/4).
    Tan { scale: f64 },
}

/// Gauss–Legendre nodes and weights on (−1, 1) plus the map to (s, ∞).
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
    pub map: HalfLineMap,
}

pub const MIN_ORDER: usize = 20;

impl QuadratureRule {
    pub fn new(order: usize) -> Result<Self> {
        Self::with_map(order, HalfLineMap::Tan { scale: 10.0 })
    }

    pub fn with_map(order: usize, map: HalfLineMap) -> Result<Self> {
        if order < MIN_ORDER {
            return Err(invalid!("quadrature order {order} is below {MIN_ORDER}"));
        }
        let HalfLineMap::Tan { scale } = map;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(invalid!("map scale must be positive, got {scale}"));
        }
        let (nodes, weights) = gauss_legendre(order);
        Ok(QuadratureRule { nodes, weights, order, map })
    }

    /// Doubles the order, keeping the map.
    pub fn doubled(&self) -> Self {
        Self::with_map(self.order * 2, self.map).expect("doubling keeps a valid order")
    }

    /// Nodes and weights (Jacobian included) on (s, ∞).
    pub fn on_half_line(&self, s: f64) -> (Vec<f64>, Vec<f64>) {
        let HalfLineMap::Tan { scale } = self.map;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(u, w)| {
                let t = PI * (u + 1.0) / 4.0;
                let c = t.cos();
                (s + scale * t.tan(), w * scale * PI / (4.0 * c * c))
            })
            .unzip()
    }
}
