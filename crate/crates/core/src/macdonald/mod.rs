//! Macdonald polynomials at small degree, the first difference operator, the
//! (q,t) Cauchy kernel, q-Whittaker weights and moments, and the semidiscrete
//! Brownian polymer.

mod cauchy;
mod difference;
mod moments;
mod params;
mod polymer;
mod poly;
mod whittaker;

pub use cauchy::{macdonald_plancherel, qt_pair_h};
pub use difference::{apply_d1, d1_eigenvalue, eigen_check, JITTER};
pub use moments::{q_moment, q_moment_with, NestedContourSpec};
pub use params::{qt_inner, QTParams};
pub use polymer::{oy_polymer_mc, McEstimate, GRID_STEPS};
pub use poly::{macdonald_P, MacPoly, MAX_DEGREE, MAX_VARS};
pub use whittaker::{
    macdonald_expectation_oracle, q_binomial, q_factorial, qw_b, qw_branching, qw_p_ones, qw_p_ones_table,
    qw_plancherel_q_table, OracleValue, ORACLE_TAIL,
};
