//! Exact samplers and Markov dynamics: RSK and Viennot, Poissonized
//! Plancherel, PNG, last passage and polymers, Schur processes, plane
//! partitions, push-block and q-TASEP dynamics, ballistic deposition.

mod deposition;
mod gt;
mod lpp;
mod plancherel;
mod plane;
mod png;
mod rsk;
mod schur_process;

pub use deposition::{ballistic_deposition, growth_exponent, roughness};
pub use gt::{
    continuous_run, gt_bernoulli_step, gt_poisson_run, qtasep_run, smallest_row, GTPattern, GtEvent, Rates, Trajectory,
};
pub use lpp::{log_gamma_weights, lpp_table, lpp_time, polymer_log_partition, polymer_partition};
pub use plancherel::{random_permutation, sample_plancherel, sample_plancherel_first_row};
pub use plane::{back_wall, macmahon_coefficients, plane_partition_slots, PlanePartitionSampler, SkewPlanePartition};
pub use png::png_height;
pub use rsk::{lis_length, rsk, rsk_shape, viennot_shape, viennot_step, PointField};
pub use schur_process::{
    p_down_row, p_down_sample, p_up_row, p_up_sample, sample_schur_sequence, SchurSequence, SequenceSample, Step,
    TransitionRow, two_level_row, two_level_sample, MAX_DEFICIT, TAIL_MASS,
};
