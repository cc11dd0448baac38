//! Determinantal point processes on finite windows: kernels, correlation
//! functions, brute-force oracles and nonintersecting path counts.

mod ensemble;
mod kernel_matrix;
mod lgv;
mod oracle;

pub use ensemble::{biorth_kernel, FiniteEnsemble, MAX_GRAM_CONDITION};
pub use kernel_matrix::{corr_det, gap_prob, GapProbability, KernelMatrix, StateSpace};
pub use lgv::{lgv_count, WeightedDag};
pub use oracle::{cauchy_determinant, corr_oracle, corr_oracle_partitions, rational, site_occupied};

/// Cap on enumerated configurations.
pub const CONFIG_CAP: usize = 1 << 20;
/// Cap on enumerated path tuples.
pub const PATH_TUPLE_CAP: usize = 1_000_000;
